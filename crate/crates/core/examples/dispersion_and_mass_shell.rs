//! Eigenphases of the coin block, the null vector n(k) and the regions of
//! the Brillouin zone.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};

use diracwalk::geometry::{nbar, nbar_jacobian, region_of};
use diracwalk::spectral::{dispersion, eigensystem, n_vector, walk_matrix, KPoint};

fn main() {
    let (k, mu) = (FRAC_PI_3, FRAC_PI_6);
    let omega = dispersion(k, mu);
    let (a, b) = walk_matrix(k, mu).su2_eigenphases();
    println!("ω(π/3, π/6) = {omega:.10}, eigenphases {a:.10} {b:.10}");

    let p = KPoint::on_shell(k, mu);
    let n = n_vector(&p);
    println!("n = ({:.6}, {:.6}, {:.6}), n·n = {:.1e}", n.n0(), n.n1(), n.n2(), n.minkowski_square());

    let e = eigensystem(k, mu);
    println!("e^{{+iω}} eigenvector {:?}", e.plus.1.as_slice());

    let (x, y) = nbar(k, mu);
    println!("n̄ = ({x}, {y}), Jacobian {}", nbar_jacobian(k, mu));
    for (k, mu) in [(0.0, 0.0), (2.4, 0.0), (0.0, 2.4), (-2.4, 2.4), (std::f64::consts::FRAC_PI_2, 0.0)] {
        println!("region of ({k:.2}, {mu:.2}): {:?}", region_of(k, mu));
    }
}
