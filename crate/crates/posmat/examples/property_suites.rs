//! The numbered property suites drive randomized checks of the structural
//! facts the decomposition relies on. Each returns a small report; a
//! counterexample, if any, is carried as text.
//!
//! Run with `cargo run -p posmat --example property_suites`.

use posmat::{run_suite, RingId, SuiteConfig, SuiteError, SUITE_IDS};

fn main() {
    let mut cfg = SuiteConfig {
        ring: RingId::Dyadic,
        n: 3,
        trials: 25,
        seed: 1,
    };

    for id in SUITE_IDS {
        match run_suite(id, &cfg) {
            Ok(report) => {
                assert!(report.passed, "suite {}: {:?}", id, report.counterexample);
                println!("suite {:>2} passed: {}", report.suite, report.title);
            }
            Err(SuiteError::UnsupportedRing { detail, .. }) => {
                println!("suite {:>2} skipped: {}", id, detail);
            }
            Err(e) => panic!("suite {}: {}", id, e),
        }
    }

    // ring-dependent behavior: suite 1 needs a commutative ring, so the
    // skew ring is refused up front rather than failing mid-run
    cfg.ring = RingId::Skew;
    let err = run_suite("1", &cfg).unwrap_err();
    println!("\nover SKEW, suite 1 refuses: {}", err);

    // config validation is strict
    cfg.n = 2;
    assert!(matches!(run_suite("2", &cfg), Err(SuiteError::BadConfig(_))));
    println!("n = 2 rejected: the reconstruction needs n >= 3");
}
