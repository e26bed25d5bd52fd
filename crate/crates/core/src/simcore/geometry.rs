use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Point,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Point, radius: f64) -> Self {
        Self { center, radius }
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }
}

/// Homogeneous PPP of `density` (m⁻²) restricted to `disk`.
///
/// # Panics
/// If the density is negative or the radius is not positive.
pub fn sample_ppp<R: Rng + ?Sized>(density: f64, disk: Disk, rng: &mut R) -> Vec<Point> {
    assert!(
        density >= 0.0 && density.is_finite(),
        "PPP density must be >= 0, got {density}"
    );
    assert!(
        disk.radius > 0.0 && disk.radius.is_finite(),
        "disk radius must be > 0, got {}",
        disk.radius
    );
    let mean = density * disk.area();
    if mean == 0.0 {
        return Vec::new();
    }
    let count = Poisson::new(mean)
        .expect("finite positive mean")
        .sample(rng) as usize;
    (0..count)
        .map(|_| {
            let r = disk.radius * rng.random::<f64>().sqrt();
            let theta = 2.0 * PI * rng.random::<f64>();
            Point::new(
                disk.center.x + r * theta.cos(),
                disk.center.y + r * theta.sin(),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn points_stay_inside() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let disk = Disk::new(Point::new(10.0, -4.0), 7.0);
        for _ in 0..200 {
            for p in sample_ppp(0.05, disk, &mut rng) {
                assert!(p.distance(&disk.center) <= 7.0);
            }
        }
    }

    #[test]
    fn empty_at_zero_density() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(sample_ppp(0.0, Disk::new(Point::ORIGIN, 100.0), &mut rng).is_empty());
    }
}
