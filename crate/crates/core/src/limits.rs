//! Guard caps and time budgets shared by the expensive operations.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Environment variable holding comma separated `key=value` cap overrides.
pub const CAPS_ENV: &str = "ISOTONIA_CAPS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Maximum number of isotone maps enumerated for one pair.
    pub hom: u64,
    /// Maximum number of elements of a Hom poset (its order matrix is quadratic).
    pub hom_poset: u64,
    /// Maximum number of elements of an intermediate Groebner basis.
    pub groebner: u64,
    /// Maximum number of factorizations visited in one fiber.
    pub fiber: u64,
    /// Maximum lattice points in one fundamental parallelepiped.
    pub simplex_points: u64,
    /// Maximum candidate points over a whole Hilbert basis run.
    pub total_points: u64,
    /// Maximum number of simplices in a triangulation.
    pub simplices: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            hom: 100_000,
            hom_poset: 5_000,
            groebner: 50_000,
            fiber: 5_000_000,
            simplex_points: 1_000_000,
            total_points: 10_000_000,
            simplices: 2_000_000,
        }
    }
}

impl Caps {
    /// Defaults overridden by `ISOTONIA_CAPS`, e.g. `hom=5000,groebner=1000`.
    pub fn from_env() -> Result<Self> {
        match std::env::var(CAPS_ENV) {
            Ok(spec) => Caps::default().with_overrides(&spec),
            Err(_) => Ok(Caps::default()),
        }
    }

    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) =
                item.split_once('=').ok_or_else(|| Error::InvalidInput(format!("cap override `{item}` lacks `=`")))?;
            let value: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("cap override `{item}` is not a number")))?;
            if value == 0 {
                return Err(Error::InvalidInput(format!("cap `{key}` must be positive")));
            }
            let slot = match key.trim() {
                "hom" => &mut self.hom,
                "hom_poset" => &mut self.hom_poset,
                "groebner" | "gb" => &mut self.groebner,
                "fiber" => &mut self.fiber,
                "simplex_points" | "det" => &mut self.simplex_points,
                "total_points" | "points" => &mut self.total_points,
                "simplices" => &mut self.simplices,
                other => return Err(Error::InvalidInput(format!("unknown cap `{other}`"))),
            };
            *slot = value;
        }
        Ok(self)
    }
}

/// Caps plus an optional wall-clock deadline.
#[derive(Debug, Clone, Copy, Default)]
pub struct Limits {
    pub caps: Caps,
    deadline: Option<Instant>,
}

impl Limits {
    pub fn new(caps: Caps) -> Self {
        Limits { caps, deadline: None }
    }

    pub fn with_budget(mut self, budget: Duration) -> Self {
        self.deadline = Some(Instant::now() + budget);
        self
    }

    pub fn check_time(&self) -> Result<()> {
        match self.deadline {
            Some(deadline) if Instant::now() > deadline => Err(Error::BudgetExceeded),
            _ => Ok(()),
        }
    }

    pub(crate) fn guard(&self, what: &'static str, value: u64, cap: u64) -> Result<()> {
        if value > cap {
            Err(Error::ExplosionGuard { what, cap })
        } else {
            Ok(())
        }
    }
}
