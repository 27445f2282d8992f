//! The acceptance suite at full size: one pass/fail line per criterion,
//! written straight to stderr so it shows up without `--nocapture`.
//!
//! Criterion 4 cannot pass as stated: its closed dimension formula counts the
//! full-length chains, which the defining relation of the algebra identifies
//! with combinations of the `x_d` arrows. Its line prints `[FAIL]`; the test
//! asserts that the formula is the only sub-check that fails there and that
//! every other criterion passes.

use std::io::Write;

use tik_core::matspace::DEFAULT_BUDGET;
use tik_core::selftest::{run_all, Level};

const SEED: u64 = 0x71c;

#[test]
fn acceptance_suite() {
    let (reports, artifacts) = run_all(Level::Full, SEED, DEFAULT_BUDGET);
    let mut err = std::io::stderr().lock();
    for r in &reports {
        writeln!(err, "{r}").unwrap();
    }
    drop(err);
    assert_eq!(reports.len(), 7);
    assert!(!artifacts.is_empty());
    for r in &reports {
        if r.id == "4" {
            assert!(!r.passed, "criterion 4 formula now agrees: {}", r.detail);
            assert!(r.detail.starts_with("closed formula disagrees on 28/28 shapes"), "{}", r.detail);
            assert!(r.detail.contains("is exactly the number of full-length chains"), "{}", r.detail);
            let (failures, _) = r.detail.split_once("; otherwise ").expect("summary of passing checks");
            assert_eq!(failures.matches("; ").count(), 1, "other criterion 4 checks failed: {}", r.detail);
            assert!(r.detail.ends_with("19767 digraphs reconstructed"), "{}", r.detail);
        } else {
            assert!(r.passed, "{r}");
        }
    }
}
