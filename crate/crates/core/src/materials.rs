//! Isotropic frame materials and the category substitution applied to raw
//! material labels on ingestion.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Frame material categories that can be simulated as isotropic solids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Material {
    Steel,
    Aluminum,
    Titanium,
}

/// Raw material labels as found in source design data, including the
/// anisotropic and unspecified classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RawMaterial {
    Steel,
    Aluminum,
    Titanium,
    Carbon,
    Bamboo,
    Other,
}

/// Mechanical properties in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialProperties {
    /// Pa
    pub elastic_modulus: f64,
    pub poisson_ratio: f64,
    /// Pa
    pub shear_modulus: f64,
    /// kg/m³
    pub density: f64,
    /// Pa
    pub tensile_strength: f64,
    /// Pa
    pub yield_strength: f64,
}

const GPA: f64 = 1.0e9;
const MPA: f64 = 1.0e6;

/// AISI 4130 chromoly.
pub const STEEL: MaterialProperties = MaterialProperties {
    elastic_modulus: 205.0 * GPA,
    poisson_ratio: 0.285,
    shear_modulus: 80.0 * GPA,
    density: 7850.0,
    tensile_strength: 731.0 * MPA,
    yield_strength: 460.0 * MPA,
};

/// 6061-T6.
pub const ALUMINUM: MaterialProperties = MaterialProperties {
    elastic_modulus: 69.0 * GPA,
    poisson_ratio: 0.330,
    shear_modulus: 26.0 * GPA,
    density: 2700.0,
    tensile_strength: 310.0 * MPA,
    yield_strength: 275.0 * MPA,
};

/// Ti-6Al-4V.
pub const TITANIUM: MaterialProperties = MaterialProperties {
    elastic_modulus: 105.0 * GPA,
    poisson_ratio: 0.310,
    shear_modulus: 41.0 * GPA,
    density: 4429.0,
    tensile_strength: 1050.0 * MPA,
    yield_strength: 827.0 * MPA,
};

impl Material {
    pub const ALL: [Material; 3] = [Material::Steel, Material::Aluminum, Material::Titanium];

    pub fn as_str(self) -> &'static str {
        match self {
            Material::Steel => "Steel",
            Material::Aluminum => "Aluminum",
            Material::Titanium => "Titanium",
        }
    }
}

/// Property table lookup.
pub fn lookup(material: Material) -> MaterialProperties {
    match material {
        Material::Steel => STEEL,
        Material::Aluminum => ALUMINUM,
        Material::Titanium => TITANIUM,
    }
}

/// Maps a raw label onto a simulable category. Carbon, bamboo and the
/// unspecified class all become aluminum.
pub fn substitute_category(raw: RawMaterial) -> Material {
    match raw {
        RawMaterial::Steel => Material::Steel,
        RawMaterial::Aluminum => Material::Aluminum,
        RawMaterial::Titanium => Material::Titanium,
        RawMaterial::Carbon | RawMaterial::Bamboo | RawMaterial::Other => Material::Aluminum,
    }
}

impl From<Material> for RawMaterial {
    fn from(m: Material) -> Self {
        match m {
            Material::Steel => RawMaterial::Steel,
            Material::Aluminum => RawMaterial::Aluminum,
            Material::Titanium => RawMaterial::Titanium,
        }
    }
}

impl RawMaterial {
    pub fn is_isotropic(self) -> bool {
        matches!(self, RawMaterial::Steel | RawMaterial::Aluminum | RawMaterial::Titanium)
    }
}

impl fmt::Display for Material {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown material `{0}`")]
pub struct UnknownMaterial(pub String);

impl FromStr for RawMaterial {
    type Err = UnknownMaterial;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "steel" => Ok(RawMaterial::Steel),
            "aluminum" | "aluminium" => Ok(RawMaterial::Aluminum),
            "titanium" => Ok(RawMaterial::Titanium),
            "carbon" => Ok(RawMaterial::Carbon),
            "bamboo" => Ok(RawMaterial::Bamboo),
            "other" => Ok(RawMaterial::Other),
            _ => Err(UnknownMaterial(s.to_string())),
        }
    }
}

impl FromStr for Material {
    type Err = UnknownMaterial;

    /// Accepts only the three simulable names; use [`RawMaterial`] plus
    /// [`substitute_category`] for source labels.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.parse::<RawMaterial>()? {
            RawMaterial::Steel => Ok(Material::Steel),
            RawMaterial::Aluminum => Ok(Material::Aluminum),
            RawMaterial::Titanium => Ok(Material::Titanium),
            _ => Err(UnknownMaterial(s.to_string())),
        }
    }
}
