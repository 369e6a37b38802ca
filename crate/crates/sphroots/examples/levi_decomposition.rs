//! Grade a root system by the centre of a standard Levi subgroup.

use std::sync::Arc;

use num_rational::Rational64 as Q;

use sphroots::levi::LeviDatum;
use sphroots::rootsystem::{build_root_system, LatticeModel};

fn main() {
    let rs = Arc::new(build_root_system(&"B3".parse().unwrap(), LatticeModel::Sc));
    let ld = LeviDatum::new(rs, &[1]).unwrap();
    println!("Levi nodes {:?}, centre rank {}", ld.pi_l(), ld.c_dim());
    for (i, m) in ld.positive_c_roots().iter().enumerate() {
        println!(
            "positive C-root {i}: weight {}, dim {}, highest {:?}, lowest {:?}",
            show(&ld.c_coords(&m.weight)),
            m.dim,
            ld.hat(i),
            ld.lowest(i)
        );
    }
    for a in 0..ld.num_positive() {
        for b in 0..ld.num_positive() {
            if let Some(c) = ld.diff_positive(a, b) {
                println!("{:?} - {:?} = {:?}", ld.hat(a), ld.hat(b), ld.hat(c));
            }
        }
    }
}

fn show(v: &[Q]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}
