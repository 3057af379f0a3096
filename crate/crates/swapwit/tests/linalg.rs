use num_complex::Complex64;

use swapwit::linalg::{Matrix2, Matrix4};

#[test]
fn eigenvalues_of_pauli_y() {
    let y = Matrix2::<f64>::from_fn(|i, j| match (i, j) {
        (0, 1) => Complex64::new(0.0, -1.0),
        (1, 0) => Complex64::new(0.0, 1.0),
        _ => Complex64::new(0.0, 0.0),
    });
    let ev = y.hermitian_eigenvalues();
    assert!((ev[0] + 1.0).abs() < 1e-14);
    assert!((ev[1] - 1.0).abs() < 1e-14);
}

#[test]
fn square_root_squares_back() {
    let h = Matrix4::<f64>::from_fn(|i, j| {
        let base = Complex64::new((i + j) as f64 * 0.1, (i as f64 - j as f64) * 0.2);
        if i == j {
            base + Complex64::new(2.0, 0.0)
        } else {
            base
        }
    });
    let pos = h * h.adjoint();
    let root = pos.hermitian_map(|x| x.max(0.0).sqrt());
    assert!((root * root).max_abs_diff(&pos) < 1e-12);
}

#[test]
fn degenerate_spectrum() {
    let m = Matrix4::<f64>::identity().scale(0.25);
    for ev in m.hermitian_eigenvalues() {
        assert!((ev - 0.25).abs() < 1e-15);
    }
}
