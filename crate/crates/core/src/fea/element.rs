//! 12×12 Euler–Bernoulli space-frame element in local and global axes.

use nalgebra::{Matrix3, SMatrix, SVector};

use crate::geometry::{Point3, SectionProperties};

use super::ElasticConstants;

pub type Matrix12 = SMatrix<f64, 12, 12>;
pub type Vector12 = SVector<f64, 12>;

/// Above this |cos| with global z the element counts as lateral and its
/// local z is taken from global y instead.
const LATERAL_COS: f64 = 0.99;

/// Rows are the local x, y, z axes expressed in global coordinates.
pub fn local_frame(start: &Point3, end: &Point3) -> Matrix3<f64> {
    let ex = (end - start).normalize();
    let reference = if ex.z.abs() > LATERAL_COS { Point3::y() } else { Point3::z() };
    let ez = (reference - reference.dot(&ex) * ex).normalize();
    let ey = ez.cross(&ex);
    Matrix3::from_rows(&[ex.transpose(), ey.transpose(), ez.transpose()])
}

pub fn local_stiffness(length: f64, section: &SectionProperties, mat: &ElasticConstants) -> Matrix12 {
    let l = length;
    let e = mat.elastic_modulus;
    let ea = e * section.area / l;
    let gj = mat.shear_modulus * section.j_torsion / l;
    let ei = e * section.i_bend;
    let b12 = 12.0 * ei / (l * l * l);
    let b6 = 6.0 * ei / (l * l);
    let b4 = 4.0 * ei / l;
    let b2 = 2.0 * ei / l;

    let mut k = Matrix12::zeros();
    let mut set = |i: usize, j: usize, v: f64| {
        k[(i, j)] = v;
        k[(j, i)] = v;
    };

    set(0, 0, ea);
    set(0, 6, -ea);
    set(6, 6, ea);

    set(3, 3, gj);
    set(3, 9, -gj);
    set(9, 9, gj);

    // v, θz (bending in the local x–y plane)
    set(1, 1, b12);
    set(1, 5, b6);
    set(1, 7, -b12);
    set(1, 11, b6);
    set(5, 5, b4);
    set(5, 7, -b6);
    set(5, 11, b2);
    set(7, 7, b12);
    set(7, 11, -b6);
    set(11, 11, b4);

    // w, θy (bending in the local x–z plane)
    set(2, 2, b12);
    set(2, 4, -b6);
    set(2, 8, -b12);
    set(2, 10, -b6);
    set(4, 4, b4);
    set(4, 8, b6);
    set(4, 10, b2);
    set(8, 8, b12);
    set(8, 10, b6);
    set(10, 10, b4);

    k
}

/// Block-diagonal rotation taking global element DOFs to local ones.
pub fn transformation(frame: &Matrix3<f64>) -> Matrix12 {
    let mut t = Matrix12::zeros();
    for block in 0..4 {
        t.fixed_view_mut::<3, 3>(3 * block, 3 * block).copy_from(frame);
    }
    t
}

pub fn global_stiffness(
    start: &Point3,
    end: &Point3,
    section: &SectionProperties,
    mat: &ElasticConstants,
) -> Matrix12 {
    let length = (end - start).norm();
    let t = transformation(&local_frame(start, end));
    t.transpose() * local_stiffness(length, section, mat) * t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::tube_section_properties;

    fn steel() -> ElasticConstants {
        ElasticConstants { elastic_modulus: 205e9, shear_modulus: 80e9 }
    }

    #[test]
    fn frame_is_orthonormal_right_handed() {
        let cases = [
            (Point3::zeros(), Point3::new(1.0, 0.0, 0.0)),
            (Point3::zeros(), Point3::new(0.3, -0.7, 0.1)),
            (Point3::zeros(), Point3::new(0.0, 0.0, 1.0)),
            (Point3::zeros(), Point3::new(0.0, 1.0, 0.0)),
        ];
        for (a, b) in cases {
            let r = local_frame(&a, &b);
            let err = (r * r.transpose() - Matrix3::identity()).norm();
            assert!(err < 1e-14);
            assert!((r.determinant() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn lateral_element_uses_global_y() {
        let r = local_frame(&Point3::zeros(), &Point3::new(0.0, 0.0, 0.2));
        assert!((r.row(2).transpose() - Point3::y()).norm() < 1e-15);
    }

    #[test]
    fn global_matrix_is_symmetric_and_has_six_rigid_modes() {
        let s = tube_section_properties(0.025, 0.002).unwrap();
        let k = global_stiffness(&Point3::new(0.1, 0.2, -0.1), &Point3::new(0.5, -0.3, 0.2), &s, &steel());
        let asym = (k - k.transpose()).abs().max();
        assert!(asym <= 1e-10 * k.abs().max());

        // Rigid translation along any axis produces no force.
        let mut u = Vector12::zeros();
        for i in [0, 6] {
            u[i] = 1.0;
            u[i + 1] = -2.0;
            u[i + 2] = 0.5;
        }
        assert!((k * u).norm() < 1e-6 * k.abs().max());

        let eig = k.symmetric_eigenvalues();
        let scale = eig.abs().max();
        let zero_modes = eig.iter().filter(|v| v.abs() < 1e-9 * scale).count();
        assert_eq!(zero_modes, 6);
    }
}
