//! Uniform samples from a disk with circular holes.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Point2, Result};

/// Identifier of the sampling algorithm, recorded in output metadata.
/// ChaCha8 stream, each coordinate from the top 53 bits of one `u64`.
pub const RNG_ALGORITHM: &str = "chacha8-f53";

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20180101;

const MAX_ATTEMPTS_PER_POINT: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point2,
    pub radius: f64,
}

impl Circle {
    pub const fn new(x: f64, y: f64, radius: f64) -> Self {
        Self {
            center: Point2::new(x, y),
            radius,
        }
    }

    fn contains_open(&self, p: Point2) -> bool {
        let (dx, dy) = (p.x - self.center.x, p.y - self.center.y);
        dx * dx + dy * dy < self.radius * self.radius
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub outer: Circle,
    pub holes: Vec<Circle>,
}

impl Region {
    pub fn disk(radius: f64) -> Self {
        Self {
            outer: Circle::new(0.0, 0.0, radius),
            holes: Vec::new(),
        }
    }

    /// Unit disk with four holes of radius 0.18 centred at (±0.45, ±0.45).
    pub fn holed_disk() -> Self {
        let holes = [(-0.45, -0.45), (0.45, -0.45), (-0.45, 0.45), (0.45, 0.45)]
            .into_iter()
            .map(|(x, y)| Circle::new(x, y, 0.18))
            .collect();
        Self {
            outer: Circle::new(0.0, 0.0, 1.0),
            holes,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = std::iter::once(&self.outer).chain(&self.holes);
        for c in all {
            if !(c.radius > 0.0 && c.radius.is_finite() && c.center.is_finite()) {
                return Err(Error::InvalidRegion(format!("bad circle {c:?}")));
            }
        }
        for (i, h) in self.holes.iter().enumerate() {
            let r = crate::metric::euclidean(h.center, self.outer.center);
            if r + h.radius >= self.outer.radius {
                return Err(Error::InvalidRegion(format!(
                    "hole {i} is not strictly inside the outer circle"
                )));
            }
            for (j, g) in self.holes.iter().enumerate().skip(i + 1) {
                if crate::metric::euclidean(h.center, g.center) <= h.radius + g.radius {
                    return Err(Error::InvalidRegion(format!("holes {i} and {j} overlap")));
                }
            }
        }
        Ok(())
    }

    /// Area of the outer disk minus the holes.
    pub fn admissible_area(&self) -> f64 {
        let sq = |r: f64| r * r;
        std::f64::consts::PI
            * (sq(self.outer.radius) - self.holes.iter().map(|h| sq(h.radius)).sum::<f64>())
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.outer.contains_open(p)
            && !self.holes.iter().any(|h| {
                let (dx, dy) = (p.x - h.center.x, p.y - h.center.y);
                dx * dx + dy * dy <= h.radius * h.radius
            })
    }
}

fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Draws `n` points uniformly from `region` by rejection from the outer
/// disk's bounding square. Deterministic for a fixed seed.
pub fn sample_region(region: &Region, n: usize, seed: u64) -> Result<Vec<Point2>> {
    if n == 0 {
        return Err(Error::EmptyInput("point count must be at least 1"));
    }
    region.validate()?;
    if region.admissible_area() <= 0.0 {
        return Err(Error::InvalidRegion("zero admissible area".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let Circle { center, radius } = region.outer;
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let mut attempts = 0;
        let p = loop {
            let x = center.x + radius * (2.0 * unit_f64(&mut rng) - 1.0);
            let y = center.y + radius * (2.0 * unit_f64(&mut rng) - 1.0);
            let p = Point2::new(x, y);
            if region.contains(p) {
                break p;
            }
            attempts += 1;
            if attempts >= MAX_ATTEMPTS_PER_POINT {
                return Err(Error::InvalidRegion(
                    "rejection sampling found no admissible point".into(),
                ));
            }
        };
        points.push(p);
    }
    Ok(points)
}
