//! Global assembly and direct solution.
//!
//! Nodes are renumbered with reverse Cuthill–McKee, the reduced stiffness
//! matrix (free DOFs only) is stored in skyline form and factored as LDLᵀ,
//! column by column. The solution is polished by iterative refinement.

use nalgebra::DMatrix;

use super::element::{self, Vector12};
use super::{BeamModel, EndForces, FeaError, SolutionField, DOF_PER_NODE};

/// A pivot at or below this fraction of its original diagonal entry marks
/// the system as singular.
const PIVOT_TOLERANCE: f64 = 1e-12;

fn validate(model: &BeamModel) -> Result<(), FeaError> {
    let n = model.nodes.len();
    if model.constraints.len() != n || model.loads.len() != n {
        return Err(FeaError::InvalidModel("constraint/load arrays do not match node count".into()));
    }
    for (i, e) in model.elements.iter().enumerate() {
        if e.nodes[0] >= n || e.nodes[1] >= n || e.nodes[0] == e.nodes[1] {
            return Err(FeaError::InvalidModel(format!("element {i} has bad connectivity")));
        }
        if e.section >= model.sections.len() || e.material >= model.materials.len() {
            return Err(FeaError::InvalidModel(format!("element {i} references a missing section or material")));
        }
        let length = model.element_length(e);
        if !(length > 0.0 && length.is_finite()) {
            return Err(FeaError::DegenerateTube { length });
        }
    }
    Ok(())
}

fn adjacency(model: &BeamModel) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); model.nodes.len()];
    for e in &model.elements {
        let [a, b] = e.nodes;
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

fn bfs_levels(adj: &[Vec<usize>], start: usize, seen: &mut [bool]) -> Vec<usize> {
    let mut order = vec![start];
    seen[start] = true;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        let mut next: Vec<usize> = adj[v].iter().copied().filter(|&w| !seen[w]).collect();
        next.sort_by_key(|&w| (adj[w].len(), w));
        for w in next {
            seen[w] = true;
            order.push(w);
        }
    }
    order
}

/// Reverse Cuthill–McKee node ordering, component by component.
pub fn rcm_order(model: &BeamModel) -> Vec<usize> {
    let adj = adjacency(model);
    let n = adj.len();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);

    let mut candidates: Vec<usize> = (0..n).collect();
    candidates.sort_by_key(|&v| (adj[v].len(), v));
    for &seed in &candidates {
        if placed[seed] {
            continue;
        }
        // Move toward a pseudo-peripheral start: the last node of a BFS from
        // the seed, lowest degree first.
        let mut scratch = placed.clone();
        let sweep = bfs_levels(&adj, seed, &mut scratch);
        let far = *sweep.last().unwrap();
        let component = bfs_levels(&adj, far, &mut placed);
        order.extend(component);
    }
    order.reverse();
    order
}

/// Equation number for every (node, dof); `None` when constrained.
struct DofMap {
    equations: Vec<[Option<usize>; DOF_PER_NODE]>,
    count: usize,
}

impl DofMap {
    fn new(model: &BeamModel, order: &[usize]) -> Self {
        let mut equations = vec![[None; DOF_PER_NODE]; model.nodes.len()];
        let mut count = 0;
        for &node in order {
            for (slot, &fixed) in equations[node].iter_mut().zip(&model.constraints[node]) {
                if !fixed {
                    *slot = Some(count);
                    count += 1;
                }
            }
        }
        DofMap { equations, count }
    }

    fn element(&self, nodes: [usize; 2]) -> [Option<usize>; 12] {
        let mut out = [None; 12];
        for (slot, &node) in nodes.iter().enumerate() {
            out[slot * 6..slot * 6 + 6].copy_from_slice(&self.equations[node]);
        }
        out
    }
}

/// Symmetric matrix stored by columns from the first nonzero row down to the
/// diagonal.
#[derive(Clone)]
struct Skyline {
    first_row: Vec<usize>,
    /// Offset of column j's first stored entry.
    start: Vec<usize>,
    values: Vec<f64>,
}

/// Error-free product: `a * b == p + e` exactly.
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Error-free sum: `a + b == s + e` exactly.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Running sum carried in twice working precision.
#[derive(Clone, Copy, Default)]
struct Compensated {
    sum: f64,
    err: f64,
}

impl Compensated {
    fn add_product(&mut self, a: f64, b: f64) {
        let (p, ep) = two_prod(a, b);
        let (s, es) = two_sum(self.sum, p);
        self.sum = s;
        self.err += ep + es;
    }

    fn value(self) -> f64 {
        self.sum + self.err
    }
}

impl Skyline {
    fn with_profile(first_row: Vec<usize>) -> Self {
        let mut start = Vec::with_capacity(first_row.len() + 1);
        let mut total = 0;
        for (j, &f) in first_row.iter().enumerate() {
            start.push(total);
            total += j - f + 1;
        }
        start.push(total);
        Skyline { first_row, start, values: vec![0.0; total] }
    }

    fn len(&self) -> usize {
        self.first_row.len()
    }

    fn column(&self, j: usize) -> &[f64] {
        &self.values[self.start[j]..self.start[j + 1]]
    }

    fn add(&mut self, i: usize, j: usize, v: f64) {
        let (row, col) = if i <= j { (i, j) } else { (j, i) };
        let idx = self.start[col] + row - self.first_row[col];
        self.values[idx] += v;
    }

    /// In-place LDLᵀ factorization: column j ends up holding the multipliers
    /// l_ij above the diagonal and d_j on it. Free of square roots, so
    /// scaling the matrix by a power of two scales D exactly and leaves L
    /// unchanged.
    fn factor(&mut self) -> Result<(), FeaError> {
        let n = self.len();
        for j in 0..n {
            let fj = self.first_row[j];
            let sj = self.start[j];
            // g_i = a_ij - sum_r l_ri g_r, kept unscaled for now
            for i in fj..j {
                let fi = self.first_row[i];
                let lo = fi.max(fj);
                let si = self.start[i];
                let dot: f64 = self.values[si + lo - fi..si + i - fi]
                    .iter()
                    .zip(&self.values[sj + lo - fj..sj + i - fj])
                    .map(|(l, g)| l * g)
                    .sum();
                self.values[sj + i - fj] -= dot;
            }
            let diag_original = self.values[sj + j - fj];
            let mut pivot = diag_original;
            for i in fj..j {
                let d_i = self.values[self.start[i] + i - self.first_row[i]];
                let g = self.values[sj + i - fj];
                let l = g / d_i;
                pivot -= l * g;
                self.values[sj + i - fj] = l;
            }
            if !(pivot > PIVOT_TOLERANCE * diag_original.abs()) || !pivot.is_finite() {
                return Err(FeaError::SingularSystem { equation: j, pivot });
            }
            self.values[sj + j - fj] = pivot;
        }
        Ok(())
    }

    /// Solves with a factored matrix, overwriting `rhs` with the solution.
    fn solve(&self, rhs: &mut [f64]) {
        let n = rhs.len();
        // L y = b
        for j in 0..n {
            let fj = self.first_row[j];
            let col = self.column(j);
            let dot: f64 = col[..j - fj].iter().zip(&rhs[fj..j]).map(|(a, b)| a * b).sum();
            rhs[j] -= dot;
        }
        for (j, r) in rhs.iter_mut().enumerate() {
            *r /= self.column(j)[j - self.first_row[j]];
        }
        // Lᵀ x = D⁻¹ y
        for j in (0..n).rev() {
            let fj = self.first_row[j];
            let col = self.column(j);
            let xj = rhs[j];
            for (r, l) in rhs[fj..j].iter_mut().zip(&col[..j - fj]) {
                *r -= l * xj;
            }
        }
    }

    /// b - A x with the products and sums carried in twice working
    /// precision. `self` must be the unfactored matrix.
    fn residual(&self, x: &[f64], b: &[f64]) -> Vec<f64> {
        let mut acc: Vec<Compensated> = b.iter().map(|&v| Compensated { sum: v, err: 0.0 }).collect();
        for j in 0..self.len() {
            let fj = self.first_row[j];
            let col = self.column(j);
            for (offset, &a) in col[..j - fj].iter().enumerate() {
                let i = fj + offset;
                acc[i].add_product(-a, x[j]);
                acc[j].add_product(-a, x[i]);
            }
            acc[j].add_product(-col[j - fj], x[j]);
        }
        acc.into_iter().map(Compensated::value).collect()
    }
}

/// Solves `matrix · x = rhs`, then refines x against an extra-precise
/// residual. Frames mix millimetre-long junction segments with long tubes,
/// which drives the condition number to ~1e10; the refinement recovers the
/// digits the factorization loses.
fn solve_refined(matrix: &Skyline, rhs: &[f64]) -> Result<Vec<f64>, FeaError> {
    const MAX_STEPS: usize = 6;
    let mut factored = matrix.clone();
    factored.factor()?;
    let mut x = rhs.to_vec();
    factored.solve(&mut x);
    for _ in 0..MAX_STEPS {
        let mut dx = matrix.residual(&x, rhs);
        factored.solve(&mut dx);
        let step = dx.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let size = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (xi, d) in x.iter_mut().zip(&dx) {
            *xi += d;
        }
        if !(step > f64::EPSILON * size) {
            break;
        }
    }
    Ok(x)
}

fn element_matrix(model: &BeamModel, index: usize) -> element::Matrix12 {
    let e = &model.elements[index];
    element::global_stiffness(
        &model.nodes[e.nodes[0]],
        &model.nodes[e.nodes[1]],
        &model.sections[e.section],
        &model.materials[e.material],
    )
}

/// Dense global stiffness over all 6·n DOFs, before any constraint is
/// applied. Intended for inspection of small models.
pub fn global_stiffness(model: &BeamModel) -> DMatrix<f64> {
    let n = model.dof_count();
    let mut k = DMatrix::zeros(n, n);
    for (index, e) in model.elements.iter().enumerate() {
        let ke = element_matrix(model, index);
        let dofs: Vec<usize> = e
            .nodes
            .iter()
            .flat_map(|&node| (0..DOF_PER_NODE).map(move |d| node * DOF_PER_NODE + d))
            .collect();
        for (a, &ga) in dofs.iter().enumerate() {
            for (b, &gb) in dofs.iter().enumerate() {
                k[(ga, gb)] += ke[(a, b)];
            }
        }
    }
    k
}

/// Assembles the reduced system, solves it and recovers element end forces
/// and support reactions.
pub fn assemble_and_solve(model: &BeamModel) -> Result<SolutionField, FeaError> {
    validate(model)?;
    let order = rcm_order(model);
    let map = DofMap::new(model, &order);
    let neq = map.count;

    let element_dofs: Vec<[Option<usize>; 12]> =
        model.elements.iter().map(|e| map.element(e.nodes)).collect();

    let mut first_row: Vec<usize> = (0..neq).collect();
    for dofs in &element_dofs {
        if let Some(min) = dofs.iter().flatten().min() {
            for &d in dofs.iter().flatten() {
                first_row[d] = first_row[d].min(*min);
            }
        }
    }

    let mut k = Skyline::with_profile(first_row);
    let element_matrices: Vec<element::Matrix12> =
        (0..model.elements.len()).map(|i| element_matrix(model, i)).collect();
    for (ke, dofs) in element_matrices.iter().zip(&element_dofs) {
        for a in 0..12 {
            let Some(ga) = dofs[a] else { continue };
            for b in a..12 {
                let Some(gb) = dofs[b] else { continue };
                // Each unordered pair once; the skyline holds one triangle.
                k.add(ga, gb, ke[(a, b)]);
            }
        }
    }

    let mut rhs = vec![0.0; neq];
    for (node, eqs) in map.equations.iter().enumerate() {
        for (d, eq) in eqs.iter().enumerate() {
            if let Some(eq) = eq {
                rhs[*eq] = model.loads[node][d];
            }
        }
    }

    let solution = if neq > 0 { solve_refined(&k, &rhs)? } else { Vec::new() };

    let mut displacements = vec![[0.0; DOF_PER_NODE]; model.nodes.len()];
    for (node, eqs) in map.equations.iter().enumerate() {
        for (d, eq) in eqs.iter().enumerate() {
            if let Some(eq) = eq {
                displacements[node][d] = solution[*eq];
            }
        }
    }
    if displacements.iter().flatten().any(|v| !v.is_finite()) {
        return Err(FeaError::SingularSystem { equation: 0, pivot: f64::NAN });
    }

    let mut internal = vec![[0.0; DOF_PER_NODE]; model.nodes.len()];
    let mut element_forces = Vec::with_capacity(model.elements.len());
    for (e, ke) in model.elements.iter().zip(&element_matrices) {
        let mut u = Vector12::zeros();
        for (slot, &node) in e.nodes.iter().enumerate() {
            for d in 0..DOF_PER_NODE {
                u[slot * 6 + d] = displacements[node][d];
            }
        }
        let f_global = ke * u;
        for (slot, &node) in e.nodes.iter().enumerate() {
            for d in 0..DOF_PER_NODE {
                internal[node][d] += f_global[slot * 6 + d];
            }
        }

        let (a, b) = (&model.nodes[e.nodes[0]], &model.nodes[e.nodes[1]]);
        let t = element::transformation(&element::local_frame(a, b));
        let kl = element::local_stiffness((b - a).norm(), &model.sections[e.section], &model.materials[e.material]);
        let f = kl * (t * u);
        let end = |o: usize| EndForces {
            axial: f[o],
            shear_y: f[o + 1],
            shear_z: f[o + 2],
            torsion: f[o + 3],
            moment_y: f[o + 4],
            moment_z: f[o + 5],
        };
        element_forces.push([end(0), end(6)]);
    }

    let mut reactions = vec![[0.0; DOF_PER_NODE]; model.nodes.len()];
    for node in 0..model.nodes.len() {
        for d in 0..DOF_PER_NODE {
            if model.constraints[node][d] {
                reactions[node][d] = internal[node][d] - model.loads[node][d];
            }
        }
    }

    Ok(SolutionField { displacements, element_forces, reactions })
}
