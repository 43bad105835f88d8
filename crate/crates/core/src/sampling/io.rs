//! Comma-separated design and result files.
//!
//! Design files carry `row_id` plus the 37 parameter columns; result files
//! carry `row_id`, the ten performance columns, `status` and `validity`.
//! Column order on read is free, but the column set must match exactly.
//! An empty cell is a missing value.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::path::Path;

use crate::geometry::{
    parameter_columns, FrameParams, CHAIN_STAY_BRIDGE_FLAG, MATERIAL_FIELD, SEAT_STAY_BRIDGE_FLAG,
};
use crate::load_cases::{PerformanceField, PerformanceRecord, PerformanceValues, Status, Validity};
use crate::materials::{substitute_category, RawMaterial};

use super::{DesignRow, DesignTable, ResultRow, ResultTable};

pub const ROW_ID: &str = "row_id";

pub const RESULT_COLUMNS: [&str; 13] = [
    ROW_ID,
    "inplane_bb_vertical_disp",
    "inplane_bb_lateral_disp",
    "inplane_dropout_vertical_disp",
    "inplane_dropout_lateral_disp",
    "inplane_safety_factor",
    "transverse_bb_lateral_disp",
    "eccentric_bb_vertical_disp",
    "eccentric_bb_twist",
    "eccentric_safety_factor",
    "mass",
    "status",
    "validity",
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemaError {
    #[error("file has no header row")]
    MissingHeader,
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("unknown column `{0}`")]
    UnknownColumn(String),
    #[error("duplicate column `{0}`")]
    DuplicateColumn(String),
    #[error("duplicate row id {0}")]
    DuplicateRowId(u64),
}

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("schema error: {0}")]
    Schema(#[from] SchemaError),
    #[error("parse error at line {line}, column `{column}`: {message}")]
    Parse { line: u64, column: String, message: String },
    #[error("malformed csv: {0}")]
    Csv(String),
}

/// Side information gathered while reading a design file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IngestReport {
    /// Rows whose material label was mapped onto a simulable category.
    pub material_substitutions: usize,
}

fn io_error(path: &Path, source: std::io::Error) -> DataError {
    DataError::Io { path: path.display().to_string(), source }
}

fn csv_error(path: &Path, e: csv::Error) -> DataError {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => io_error(path, source),
        other => DataError::Csv(format!("{other:?}")),
    }
}

/// Maps each expected column to its position in the file header.
fn column_index(header: &csv::StringRecord, expected: &[&str]) -> Result<HashMap<String, usize>, SchemaError> {
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(SchemaError::MissingHeader);
    }
    let expected_set: BTreeSet<&str> = expected.iter().copied().collect();
    let mut index = HashMap::new();
    for (i, name) in header.iter().enumerate() {
        let name = name.trim();
        if !expected_set.contains(name) {
            return Err(SchemaError::UnknownColumn(name.to_string()));
        }
        if index.insert(name.to_string(), i).is_some() {
            return Err(SchemaError::DuplicateColumn(name.to_string()));
        }
    }
    if let Some(missing) = expected.iter().find(|c| !index.contains_key(**c)) {
        return Err(SchemaError::MissingColumn(missing.to_string()));
    }
    Ok(index)
}

struct Row<'a> {
    record: &'a csv::StringRecord,
    index: &'a HashMap<String, usize>,
    line: u64,
}

impl Row<'_> {
    fn cell(&self, column: &str) -> &str {
        self.record.get(self.index[column]).unwrap_or("").trim()
    }

    fn error(&self, column: &str, message: impl Into<String>) -> DataError {
        DataError::Parse { line: self.line, column: column.to_string(), message: message.into() }
    }

    fn f64(&self, column: &str) -> Result<f64, DataError> {
        let cell = self.cell(column);
        cell.parse::<f64>().map_err(|e| self.error(column, format!("`{cell}`: {e}")))
    }

    fn optional_f64(&self, column: &str) -> Result<Option<f64>, DataError> {
        if self.cell(column).is_empty() {
            Ok(None)
        } else {
            self.f64(column).map(Some)
        }
    }

    fn u64(&self, column: &str) -> Result<u64, DataError> {
        let cell = self.cell(column);
        cell.parse::<u64>().map_err(|e| self.error(column, format!("`{cell}`: {e}")))
    }

    fn bool(&self, column: &str) -> Result<bool, DataError> {
        match self.cell(column).to_ascii_lowercase().as_str() {
            "true" | "1" => Ok(true),
            "false" | "0" => Ok(false),
            other => Err(self.error(column, format!("`{other}` is not a boolean"))),
        }
    }
}

fn reader(path: &Path) -> Result<csv::Reader<File>, DataError> {
    let file = File::open(path).map_err(|e| io_error(path, e))?;
    Ok(csv::ReaderBuilder::new().has_headers(true).from_reader(file))
}

fn writer(path: &Path) -> Result<csv::Writer<File>, DataError> {
    let file = File::create(path).map_err(|e| io_error(path, e))?;
    Ok(csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(file))
}

/// Reads a design file. Non-isotropic material labels are substituted and
/// counted in the returned report.
pub fn read_designs(path: &Path) -> Result<(DesignTable, IngestReport), DataError> {
    let mut rdr = reader(path)?;
    let mut expected = vec![ROW_ID];
    expected.extend(parameter_columns());
    let header = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    let index = column_index(&header, &expected)?;

    let mut table = DesignTable::default();
    let mut report = IngestReport::default();
    let mut ids = BTreeSet::new();
    let mut record = csv::StringRecord::new();
    let mut line = 1;
    while rdr.read_record(&mut record).map_err(|e| csv_error(path, e))? {
        line += 1;
        let row = Row { record: &record, index: &index, line };
        let id = row.u64(ROW_ID)?;
        if !ids.insert(id) {
            return Err(SchemaError::DuplicateRowId(id).into());
        }

        let mut params = FrameParams::reference_road();
        let names = parameter_columns();
        for (slot, name) in params.continuous_values_mut().into_iter().zip(&names) {
            *slot = row.f64(name)?;
        }
        let raw: RawMaterial = row
            .cell(MATERIAL_FIELD)
            .parse()
            .map_err(|e: crate::materials::UnknownMaterial| row.error(MATERIAL_FIELD, e.to_string()))?;
        if !raw.is_isotropic() {
            report.material_substitutions += 1;
        }
        params.material = substitute_category(raw);
        params.has_chain_stay_bridge = row.bool(CHAIN_STAY_BRIDGE_FLAG)?;
        params.has_seat_stay_bridge = row.bool(SEAT_STAY_BRIDGE_FLAG)?;
        table.rows.push(DesignRow { id, params });
    }
    if report.material_substitutions > 0 {
        log::info!(
            "{}: substituted aluminum for {} non-isotropic material label(s)",
            path.display(),
            report.material_substitutions
        );
    }
    Ok((table, report))
}

pub fn write_designs(path: &Path, table: &DesignTable) -> Result<(), DataError> {
    let mut w = writer(path)?;
    let mut header = vec![ROW_ID];
    header.extend(parameter_columns());
    w.write_record(&header).map_err(|e| csv_error(path, e))?;
    for row in &table.rows {
        let p = &row.params;
        let mut cells: Vec<String> = Vec::with_capacity(38);
        cells.push(row.id.to_string());
        cells.extend(p.continuous_values().iter().map(|v| v.to_string()));
        cells.push(p.material.to_string());
        cells.push(p.has_chain_stay_bridge.to_string());
        cells.push(p.has_seat_stay_bridge.to_string());
        w.write_record(&cells).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| io_error(path, e))
}

pub fn write_results(path: &Path, table: &ResultTable) -> Result<(), DataError> {
    let mut w = writer(path)?;
    w.write_record(RESULT_COLUMNS).map_err(|e| csv_error(path, e))?;
    for row in &table.rows {
        let mut cells: Vec<String> = Vec::with_capacity(RESULT_COLUMNS.len());
        cells.push(row.id.to_string());
        for field in PerformanceField::ALL {
            cells.push(row.record.get(field).map(|v| v.to_string()).unwrap_or_default());
        }
        cells.push(row.record.status.as_str().to_string());
        cells.push(row.validity.as_str().to_string());
        w.write_record(&cells).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| io_error(path, e))
}

pub fn read_results(path: &Path) -> Result<ResultTable, DataError> {
    let mut rdr = reader(path)?;
    let header = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    let index = column_index(&header, &RESULT_COLUMNS)?;

    let mut table = ResultTable::default();
    let mut ids = BTreeSet::new();
    let mut record = csv::StringRecord::new();
    let mut line = 1;
    while rdr.read_record(&mut record).map_err(|e| csv_error(path, e))? {
        line += 1;
        let row = Row { record: &record, index: &index, line };
        let id = row.u64(ROW_ID)?;
        if !ids.insert(id) {
            return Err(SchemaError::DuplicateRowId(id).into());
        }
        let status: Status = row.cell("status").parse().map_err(|e: String| row.error("status", e))?;
        let validity: Validity = row.cell("validity").parse().map_err(|e: String| row.error("validity", e))?;

        let mut values = [None; 10];
        for field in PerformanceField::ALL {
            values[field.index()] = row.optional_f64(field.name())?;
        }
        let record = match status {
            Status::Ok => {
                let mut full = [0.0; 10];
                for field in PerformanceField::ALL {
                    full[field.index()] = values[field.index()]
                        .ok_or_else(|| row.error(field.name(), "missing value on an Ok row"))?;
                }
                PerformanceRecord::ok(PerformanceValues(full))
            }
            other => {
                if let Some(field) = PerformanceField::ALL.into_iter().find(|f| values[f.index()].is_some()) {
                    return Err(row.error(field.name(), "value present on a failed row"));
                }
                PerformanceRecord::failed(other)
            }
        };
        table.rows.push(ResultRow { id, record, validity });
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::generate_designs;

    #[test]
    fn result_columns_match_fields() {
        for (field, col) in PerformanceField::ALL.iter().zip(&RESULT_COLUMNS[1..11]) {
            assert_eq!(field.name(), *col);
        }
    }

    #[test]
    fn design_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("designs.csv");
        let table = generate_designs(12, 3);
        write_designs(&path, &table).unwrap();
        let (back, report) = read_designs(&path).unwrap();
        assert_eq!(back, table);
        assert_eq!(report.material_substitutions, 0);
    }

    fn rewrite(path: &Path, f: impl Fn(String) -> String) {
        let text = std::fs::read_to_string(path).unwrap();
        std::fs::write(path, f(text)).unwrap();
    }

    #[test]
    fn missing_column_is_named() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("designs.csv");
        write_designs(&path, &generate_designs(2, 1)).unwrap();
        rewrite(&path, |t| t.replacen("seat_tube_length", "seat_tube_lenght", 1));
        match read_designs(&path) {
            Err(DataError::Schema(SchemaError::UnknownColumn(c))) => assert_eq!(c, "seat_tube_lenght"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dropped_column_is_missing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("designs.csv");
        let table = generate_designs(1, 1);
        let mut w = csv::Writer::from_path(&path).unwrap();
        let mut header = vec![ROW_ID];
        header.extend(parameter_columns().into_iter().filter(|c| *c != "seat_tube_length"));
        w.write_record(&header).unwrap();
        let p = &table.rows[0].params;
        let mut cells = vec!["0".to_string()];
        for (name, v) in parameter_columns().iter().zip(p.continuous_values()) {
            if *name != "seat_tube_length" {
                cells.push(v.to_string());
            }
        }
        cells.extend(["Steel".into(), "true".into(), "false".into()]);
        w.write_record(&cells).unwrap();
        w.flush().unwrap();
        match read_designs(&path) {
            Err(DataError::Schema(SchemaError::MissingColumn(c))) => assert_eq!(c, "seat_tube_length"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn carbon_becomes_aluminum() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("designs.csv");
        write_designs(&path, &generate_designs(3, 1)).unwrap();
        rewrite(&path, |t| {
            let mut lines: Vec<String> = t.lines().map(String::from).collect();
            for line in lines.iter_mut().skip(1).take(2) {
                for m in ["Steel", "Aluminum", "Titanium"] {
                    *line = line.replace(m, "Carbon");
                }
            }
            lines.join("\n") + "\n"
        });
        let (table, report) = read_designs(&path).unwrap();
        assert_eq!(report.material_substitutions, 2);
        assert_eq!(table.rows[0].params.material, crate::materials::Material::Aluminum);
    }

    #[test]
    fn parse_error_has_coordinates() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("designs.csv");
        write_designs(&path, &generate_designs(2, 1)).unwrap();
        rewrite(&path, |t| {
            let mut lines: Vec<String> = t.lines().map(String::from).collect();
            let mut cells: Vec<String> = lines[2].split(',').map(String::from).collect();
            cells[3] = "abc".into();
            lines[2] = cells.join(",");
            lines.join("\n")
        });
        match read_designs(&path) {
            Err(DataError::Parse { line, column, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(column, "head_tube_angle_deg");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn duplicate_ids_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("designs.csv");
        let mut table = generate_designs(2, 1);
        table.rows[1].id = table.rows[0].id;
        write_designs(&path, &table).unwrap();
        assert!(matches!(read_designs(&path), Err(DataError::Schema(SchemaError::DuplicateRowId(0)))));
    }

    #[test]
    fn empty_file_has_no_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("designs.csv");
        std::fs::write(&path, "").unwrap();
        assert!(matches!(read_designs(&path), Err(DataError::Schema(SchemaError::MissingHeader))));
    }

    #[test]
    fn missing_file_is_io() {
        assert!(matches!(read_designs(Path::new("/nonexistent/x.csv")), Err(DataError::Io { .. })));
    }

    #[test]
    fn results_round_trip_with_missing_cells() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.csv");
        let mut v = PerformanceValues([0.0; 10]);
        for (i, x) in v.0.iter_mut().enumerate() {
            *x = (i as f64 + 0.1) * 1e-3 / 3.0;
        }
        let table = ResultTable {
            rows: vec![
                ResultRow { id: 4, record: PerformanceRecord::ok(v), validity: Validity::StructuralFailure },
                ResultRow {
                    id: 9,
                    record: PerformanceRecord::failed(Status::GeometricInfeasible),
                    validity: Validity::GeometricInfeasible,
                },
            ],
        };
        write_results(&path, &table).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.lines().nth(2).unwrap().starts_with("9,,,,,,,,,,,GeometricInfeasible"));
        assert_eq!(read_results(&path).unwrap(), table);
    }
}
