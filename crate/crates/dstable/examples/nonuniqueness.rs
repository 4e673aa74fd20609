//! The casual-stable representation is not unique: the positive discrete
//! stable law with exponent γ < 1/2 is representable both over itself and
//! over the doubled-exponent base, with visibly different base laws.
//!
//! ```bash
//! cargo run --release --example nonuniqueness
//! ```

use dstable::compose::nonuniqueness_demo;

fn main() {
    for (lambda, gamma) in [(1.0, 0.25), (2.0, 0.45)] {
        let demo = nonuniqueness_demo(lambda, gamma, 16, 1 << 12, 1e-12).unwrap();
        println!("positive discrete stable, lambda = {lambda}, gamma = {gamma}");
        println!(
            "  over itself:            max sup error {:.3e}, verdict {}",
            demo.via_self.max_error,
            if demo.via_self.verdict {
                "PASS"
            } else {
                "FAIL"
            }
        );
        println!(
            "  over doubled exponent:  max sup error {:.3e}, verdict {}",
            demo.via_sqrt.max_error,
            if demo.via_sqrt.verdict {
                "PASS"
            } else {
                "FAIL"
            }
        );
        println!(
            "  TV distance between the two base laws: {:.4}\n",
            demo.base_tv
        );
    }
}
