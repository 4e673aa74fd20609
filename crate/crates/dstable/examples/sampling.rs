//! Seeded samplers cross-validated against the Fourier-inversion oracle.
//!
//! ```bash
//! cargo run --release --example sampling
//! ```

use dstable::cf::{LatticeCf, Pgf};
use dstable::invert::{invert_to_pmf, tv_distance, ORACLE_GRID};
use dstable::sample::{
    empirical_pmf_folded, sample_compound_poisson, sample_from_window,
    sample_positive_discrete_stable, sample_positive_stable, sample_triangular_row, RandomSource,
    SampleBatch,
};
use dstable::PmfWindow;

const DRAWS: usize = 200_000;

fn main() {
    // positive stable: check the Laplace transform at u = 1
    let mut src = RandomSource::new(1);
    let mean: f64 = (0..DRAWS)
        .map(|_| (-sample_positive_stable(0.5, &mut src).unwrap()).exp())
        .sum::<f64>()
        / DRAWS as f64;
    println!(
        "positive stable gamma=0.5: E e^-S = {mean:.5} (expect e^-1 = {:.5})",
        (-1.0f64).exp()
    );

    // positive discrete stable vs inversion
    for gamma in [0.5, 0.8, 1.0] {
        let mut src = RandomSource::new(2);
        let values: Vec<i64> = (0..DRAWS)
            .map(|_| sample_positive_discrete_stable(1.0, gamma, &mut src).unwrap() as i64)
            .collect();
        let batch = SampleBatch::new("positive", 2, values);
        let oracle = invert_to_pmf(
            &LatticeCf::positive_discrete_stable(1.0, gamma).unwrap(),
            ORACLE_GRID,
        )
        .unwrap();
        let tv = tv_distance(&empirical_pmf_folded(&batch, ORACLE_GRID), &oracle);
        println!(
            "positive discrete stable gamma={gamma}: TV to inversion {tv:.5} at {DRAWS} draws"
        );
    }

    // compound poisson with two-point jumps reproduces the Hermite law
    let jump = PmfWindow::from_masses(1, vec![2.0 / 3.0, 1.0 / 3.0]);
    let mut src = RandomSource::new(3);
    let values: Vec<i64> = (0..DRAWS)
        .map(|_| sample_compound_poisson(1.5, |s| sample_from_window(&jump, s), &mut src).unwrap())
        .collect();
    let batch = SampleBatch::new("compound", 3, values);
    let oracle = invert_to_pmf(&LatticeCf::hermite(1.0, 0.5).unwrap(), ORACLE_GRID).unwrap();
    let tv = tv_distance(&empirical_pmf_folded(&batch, ORACLE_GRID), &oracle);
    println!("compound poisson (hermite jumps): TV to inversion {tv:.5}");

    // triangular-array rows approach the limit law as n grows
    let pgf = Pgf::shifted_poisson(1.0).unwrap();
    let limit = invert_to_pmf(&LatticeCf::poisson(1.0).unwrap(), ORACLE_GRID).unwrap();
    for (n, seed) in [(4u32, 4u64), (16, 5), (64, 6)] {
        let mut src = RandomSource::new(seed);
        let values: Vec<i64> = (0..DRAWS)
            .map(|_| {
                sample_triangular_row(
                    n,
                    0.5,
                    &pgf,
                    |s| sample_from_window(&jump_delta1(), s),
                    &mut src,
                )
                .unwrap()
            })
            .collect();
        let batch = SampleBatch::new("row", seed, values);
        let tv = tv_distance(&empirical_pmf_folded(&batch, ORACLE_GRID), &limit);
        println!("row sum n={n:>2}: TV to the limit law {tv:.5}");
    }
}

fn jump_delta1() -> PmfWindow {
    PmfWindow::from_masses(1, vec![1.0])
}
