//! Reporting for the acceptance suite: each criterion runs once, is timed,
//! and yields one verdict line.

use std::fmt;
use std::time::{Duration, Instant};

#[derive(Debug, Clone)]
pub struct Verdict {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {} {}: {} ({:.2} s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

/// Result of a criterion body: a summary of the measured values, or the
/// reason it failed.
pub type Check = Result<String, String>;

/// Runs `body` and turns it into a verdict. A `budget` makes exceeding the
/// wall-clock limit a failure on its own.
pub fn run_criterion(
    id: u32,
    title: &'static str,
    budget: Option<Duration>,
    body: impl FnOnce() -> Check,
) -> Verdict {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if let Some(limit) = budget {
        if elapsed > limit {
            passed = false;
            detail = format!("{detail}; over the {:.0} s budget", limit.as_secs_f64());
        }
    }
    Verdict {
        id,
        title,
        passed,
        detail,
        elapsed,
    }
}

/// `Ok(())` when `cond` holds, otherwise the formatted message.
pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}
