//! Smallest enclosing circle by the randomized incremental minidisk method.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Disk, Point2D};

fn slack(d: &Disk) -> f64 {
    1e-12 * d.radius.max(1.0)
}

fn contains(d: &Disk, p: Point2D) -> bool {
    d.contains_within(p, slack(d))
}

fn diameter_disk(p: Point2D, q: Point2D) -> Disk {
    Disk::new(p.midpoint(q), 0.5 * p.dist(q))
}

fn circumdisk(a: Point2D, b: Point2D, c: Point2D) -> Disk {
    let ab = b - a;
    let ac = c - a;
    let det = 2.0 * ab.cross(ac);
    let scale = ab.dot(ab).max(ac.dot(ac));
    if det.abs() <= 1e-14 * scale {
        // Collinear: the two farthest points span the circle.
        let pairs = [(a, b), (a, c), (b, c)];
        let (p, q) = pairs
            .into_iter()
            .max_by(|x, y| x.0.dist_sq(x.1).total_cmp(&y.0.dist_sq(y.1)))
            .unwrap();
        return diameter_disk(p, q);
    }
    let ab2 = ab.dot(ab);
    let ac2 = ac.dot(ac);
    let u = Point2D::new(
        (ac.y * ab2 - ab.y * ac2) / det,
        (ab.x * ac2 - ac.x * ab2) / det,
    );
    Disk::new(a + u, u.norm())
}

fn seed_from(points: &[Point2D]) -> u64 {
    // FNV-1a over the coordinate bits.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for p in points {
        for bits in [p.x.to_bits(), p.y.to_bits()] {
            h ^= bits;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

/// The minimum-radius disk containing every point. Deterministic: the
/// internal shuffle is seeded from the input coordinates.
pub fn smallest_enclosing_circle(points: &[Point2D]) -> Result<Disk> {
    if points.is_empty() {
        return Err(Error::EmptyInput("smallest enclosing circle of no points"));
    }
    let mut pts = points.to_vec();
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(seed_from(points)));

    let mut disk = Disk::new(pts[0], 0.0);
    for i in 1..pts.len() {
        if contains(&disk, pts[i]) {
            continue;
        }
        // pts[i] is on the boundary of the disk of pts[..=i].
        disk = Disk::new(pts[i], 0.0);
        for j in 0..i {
            if contains(&disk, pts[j]) {
                continue;
            }
            // pts[i] and pts[j] are both on the boundary.
            disk = diameter_disk(pts[i], pts[j]);
            for k in 0..j {
                if !contains(&disk, pts[k]) {
                    disk = circumdisk(pts[i], pts[j], pts[k]);
                }
            }
        }
    }

    // Tighten the radius to the farthest point so that containment holds
    // up to rounding of a single distance evaluation.
    let radius = pts
        .iter()
        .map(|p| disk.center.dist(*p))
        .fold(0.0f64, f64::max);
    Ok(Disk::new(disk.center, radius))
}
