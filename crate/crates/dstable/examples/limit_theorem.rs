//! Convergence of triangular-array row sums to the compound-Poisson limit:
//! with counting law 𝒫 and thinning normalizers g_n = (1−λ/n) + (λ/n)h, the
//! row characteristic function 𝒫^n(g_n(t)) tends to exp{λ𝒫′(1)(h(t)−1)}.
//!
//! ```bash
//! cargo run --release --example limit_theorem
//! ```

use dstable::harness::{cmd_converge, RunConfig};

fn study(pgf: &str, jump: &str, lambda: f64) {
    let config = RunConfig {
        lambda: Some(lambda),
        pgf: Some(pgf.into()),
        jump: Some(jump.into()),
        n_max: Some(256),
        grid: Some(1 << 12),
        samples: Some(200_000),
        seed: Some(1),
        ..Default::default()
    };
    let report = cmd_converge(&config).unwrap();
    println!(
        "pgf = {pgf}, jump = {jump}, lambda = {lambda} -> limit {}",
        report.limit_law
    );
    println!(
        "{:>5} {:>13} {:>13} {:>9} {:>13}",
        "n", "sup-cf dist", "tv dist", "n*tv", "mc tv"
    );
    for row in &report.rows {
        println!(
            "{:>5} {:>13.4e} {:>13.4e} {:>9.5} {:>13}",
            row.n,
            row.sup_cf_distance,
            row.tv_distance,
            row.n_times_tv,
            row.monte_carlo_tv
                .map_or(String::from("-"), |tv| format!("{tv:.4e}")),
        );
    }
    println!(
        "strictly decreasing: {}, n*TV bounded: {}\n",
        report.distances_decreasing, report.n_tv_bounded
    );
}

fn main() {
    // the binomial -> Poisson classic
    study("one", "one", 0.5);
    // shifted-Poisson counts with two-point jumps: limit is the Hermite law
    study("shifted-poisson:1", "hermite:1,0.5", 0.5);
    // Hermite counts
    study("hermite:1,0.5", "one", 0.5);
}
