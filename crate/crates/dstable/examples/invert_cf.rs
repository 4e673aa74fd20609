//! Invert lattice characteristic functions to probability windows and run
//! the validity oracle.
//!
//! ```bash
//! cargo run --release --example invert_cf
//! ```

use dstable::cf::{LatticeCf, NormalizerFamily};
use dstable::invert::{invert_to_pmf, is_valid_cf, ORACLE_GRID};

fn show_head(name: &str, cf: &LatticeCf, k_range: std::ops::RangeInclusive<i64>) {
    let w = invert_to_pmf(cf, ORACLE_GRID).unwrap();
    println!(
        "{name}: sum {:.12}, decay estimate {:.2e}",
        w.sum(),
        w.decay_estimate()
    );
    for k in k_range {
        println!("  p[{k:>3}] = {:.10}", w.mass_at(k));
    }
}

fn main() {
    show_head("poisson(1)", &LatticeCf::poisson(1.0).unwrap(), 0..=5);
    show_head(
        "positive discrete stable (lambda=1, gamma=0.5)",
        &LatticeCf::positive_discrete_stable(1.0, 0.5).unwrap(),
        0..=5,
    );
    show_head(
        "symmetric discrete stable (lambda=1, gamma=0.5)",
        &LatticeCf::symmetric_discrete_stable(1.0, 0.5).unwrap(),
        -3..=3,
    );
    show_head(
        "hermite (a1=1, a2=0.5)",
        &LatticeCf::hermite(1.0, 0.5).unwrap(),
        0..=5,
    );

    // the validity oracle distinguishes genuine characteristic functions
    let good = NormalizerFamily::two_sided_sqrt(1.0, 1.0, 3.0)
        .unwrap()
        .cf_at(1);
    let bad = NormalizerFamily::two_sided_sqrt(1.0, 1.0, 0.5)
        .unwrap()
        .cf_at(1);
    for (name, cf) in [("lambda=3 (valid)", good), ("lambda=0.5 (invalid)", bad)] {
        let report = is_valid_cf(&cf, 1 << 12, 1e-10).unwrap();
        println!(
            "two-sided-sqrt normalizer, {name}: min mass {:.3e}, is_valid = {}",
            report.min_mass, report.is_valid
        );
    }
}
