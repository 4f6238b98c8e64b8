//! A near-miss automorphism: fix every monomial matrix, transpose
//! everything else. All permutation probes pass, but transvection images
//! land at the mirrored slot. A map normalized that far could only mirror
//! slots if its entry map satisfied c(x)^2 + c(x^2) = 0, which forces
//! c = 0 and contradicts order preservation, so the pipeline rejects it
//! with a concrete witness value.
//!
//! Run with `cargo run -p posmat --example flip_rejection`.

use posmat::automorphism::oracle_from_parts;
use posmat::{decompose, OraclePart, PipelineConfig, RingId, Verdict};

fn main() {
    let oracle = oracle_from_parts(3, RingId::Q, vec![OraclePart::Flip]).unwrap();

    let config = PipelineConfig {
        word_count: 0,
        ..PipelineConfig::default()
    };
    let report = decompose(&oracle, &config);

    match &report.verdict {
        Verdict::NotAutomorphism { stage, reason, .. } => {
            println!("rejected at stage {}:", stage);
            println!("  {}", reason);
            assert_eq!(*stage, "extract_c");
            assert!(reason.contains("flip case") && reason.contains("≠ 0"));
        }
        other => panic!("flip oracle must be rejected, got {:?}", other),
    }
    assert!(report.triple.is_none());

    // a plain global transpose does not even survive the permutation stage:
    // it inverts cycles
    let oracle = oracle_from_parts(4, RingId::Q, vec![OraclePart::Transpose]).unwrap();
    let report = decompose(&oracle, &config);
    match &report.verdict {
        Verdict::NotAutomorphism { stage, reason, .. } => {
            println!("\nglobal transpose rejected at stage {}:", stage);
            println!("  {}", reason);
            assert_eq!(*stage, "fix_permutations");
        }
        other => panic!("transpose oracle must be rejected, got {:?}", other),
    }

    println!("\nboth fault injections rejected as expected");
}
