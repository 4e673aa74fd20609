//! The two-sided-sqrt normalizer is a valid characteristic function only for
//! λ above a boundary. Find the boundary by bisection on the inversion
//! oracle, compare with the closed form √(λ₁² + λ₂² + 8λ₁λ₂/π)/n, and print
//! the central masses of the normalizer's law from both the DFT and the
//! expanded closed form.
//!
//! ```bash
//! cargo run --release --example minimum_lambda
//! ```

use dstable::cf::NormalizerFamily;
use dstable::invert::{
    invert_to_pmf, min_valid_lambda, two_sided_sqrt_lambda_boundary, two_sided_sqrt_pmf,
    two_sided_sqrt_pmf_tail_formula, ORACLE_GRID,
};

fn main() {
    for (l1, l2, n) in [(1.0, 1.0, 1u32), (1.0, 1.0, 2), (1.0, 2.0, 1)] {
        let bisect = min_valid_lambda(l1, l2, n, 1e-6).unwrap();
        let closed = two_sided_sqrt_lambda_boundary(l1, l2, n).unwrap();
        println!(
            "lambda1={l1}, lambda2={l2}, n={n}: bisection {bisect:.7}, closed form {closed:.7}, gap {:.1e}",
            (bisect - closed).abs()
        );
    }

    let (l1, l2, lam, n) = (1.0, 1.0, 3.0, 1u32);
    println!("\nnormalizer law at lambda1={l1}, lambda2={l2}, lambda={lam}, n={n}:");
    println!(
        "{:>4} {:>14} {:>14} {:>14}",
        "k", "dft", "closed form", "tail formula"
    );
    let w = invert_to_pmf(
        &NormalizerFamily::two_sided_sqrt(l1, l2, lam)
            .unwrap()
            .cf_at(n),
        ORACLE_GRID,
    )
    .unwrap();
    for k in -4..=4i64 {
        println!(
            "{k:>4} {:>14.10} {:>14.10} {:>14.10}",
            w.mass_at(k),
            two_sided_sqrt_pmf(l1, l2, lam, n, k).unwrap(),
            two_sided_sqrt_pmf_tail_formula(l1, l2, lam, n, k).unwrap(),
        );
    }
    println!("(the tail formula misses the center masses at k = -1, 0, 1)");
}
