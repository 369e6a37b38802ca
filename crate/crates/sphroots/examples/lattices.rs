//! Exact integer lattices: saturation, kernels, primitive vectors on rays.

use num_rational::Rational64 as Q;

use sphroots::lattice::{hnf_rows, kernel, qvec, LinearMap, Sublattice};

fn main() {
    let l = Sublattice::from_int(3, &[vec![2, 0, 0], vec![0, 2, 2]]);
    println!("rank {}, saturated: {}", l.rank(), l.is_saturated());
    println!("saturation basis {:?}", l.saturate().basis().iter().map(|b| show(b)).collect::<Vec<_>>());
    println!("contains (2,2,2): {}", l.contains(&qvec(&[2, 2, 2])));

    let ray = l.primitive_on_ray(&qvec(&[0, 5, 5])).unwrap();
    println!("primitive vector on the ray of (0,5,5): {}", show(&ray));

    let f = LinearMap::new(3, vec![qvec(&[1, -1, 0]), qvec(&[0, 1, -1])]);
    println!("kernel of the difference map: {:?}", kernel(&f).basis().iter().map(|b| show(b)).collect::<Vec<_>>());

    let h = hnf_rows(vec![vec![4, 6], vec![6, 9], vec![2, 3]], 2);
    println!("row Hermite form {h:?}");
}

fn show(v: &[Q]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}
