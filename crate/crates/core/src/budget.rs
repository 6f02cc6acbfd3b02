//! Wall-clock budgets for long computations.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// A deadline checked cooperatively by long-running loops.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    start: Instant,
    limit: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { start: Instant::now(), limit: None }
    }

    pub fn seconds(secs: f64) -> Self {
        Budget { start: Instant::now(), limit: Some(Duration::from_secs_f64(secs.max(0.0))) }
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }

    pub fn exceeded(&self) -> bool {
        matches!(self.limit, Some(l) if self.start.elapsed() > l)
    }

    /// Returns a budget error naming `stage` once the deadline has passed.
    pub fn check(&self, stage: &str) -> Result<()> {
        if self.exceeded() {
            Err(Error::Budget {
                stage: stage.to_string(),
                secs: self.limit.map(|l| l.as_secs_f64()).unwrap_or(0.0),
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::unlimited()
    }
}
