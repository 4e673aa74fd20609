//! Verify the casual-stable representation identities of the four worked
//! constructions over a range of n.
//!
//! ```bash
//! cargo run --release --example verify_identities
//! ```

use dstable::cf::LatticeCf;
use dstable::compose::{verify_representation, CasualRepresentation};
use dstable::invert::{two_sided_sqrt_lambda_boundary, PmfWindow};

fn main() {
    let grid = 1 << 12;
    let tolerance = 1e-12;

    let boundary = two_sided_sqrt_lambda_boundary(1.0, 1.0, 1).unwrap();
    let hermite_jump = LatticeCf::PmfBacked(PmfWindow::from_masses(1, vec![2.0 / 3.0, 1.0 / 3.0]));

    let reps: Vec<(&str, CasualRepresentation)> = vec![
        (
            "symmetric discrete stable (lambda=1, gamma=0.5)",
            CasualRepresentation::symmetric_discrete_stable(1.0, 0.5, 64).unwrap(),
        ),
        (
            "two-sided half-exponent law (lambda1=lambda2=1, lambda at boundary)",
            CasualRepresentation::two_sided_half_stable(1.0, 1.0, boundary, 32).unwrap(),
        ),
        (
            "hermite (a1=1, a2=0.5, a=3)",
            CasualRepresentation::hermite(1.0, 0.5, 3.0, 32).unwrap(),
        ),
        (
            "compound poisson (a=1, A=2, hermite jumps)",
            CasualRepresentation::compound_poisson(1.0, 2.0, hermite_jump, 32).unwrap(),
        ),
    ];

    for (name, rep) in reps {
        let report = verify_representation(&rep, grid, tolerance);
        println!(
            "{name}\n  n up to {}, grid {}, max sup error {:.3e}, all normalizers valid: {}, verdict: {}",
            rep.n_max,
            report.grid_size,
            report.max_error,
            report.rows.iter().all(|r| r.normalizer_valid),
            if report.verdict { "PASS" } else { "FAIL" },
        );
    }
}
