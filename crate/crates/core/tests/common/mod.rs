//! Independent oracles shared by the integration tests. None of these call
//! into the geometric algorithms they check.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uavbs::Point2D;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_points(rng: &mut impl Rng, n: usize, side: f64) -> Vec<Point2D> {
    (0..n)
        .map(|_| Point2D::new(rng.random_range(0.0..side), rng.random_range(0.0..side)))
        .collect()
}

/// Largest number of points within `r` of any node of a `step` grid over
/// `[0, side]^2`.
pub fn grid_max_cover(points: &[Point2D], r: f64, side: f64, step: f64) -> usize {
    let n = (side / step).round() as usize;
    let r2 = r * r + 1e-9;
    let mut best = 0;
    for i in 0..=n {
        let x = i as f64 * step;
        // Only points whose x-distance is within r can be covered.
        let near: Vec<Point2D> = points
            .iter()
            .copied()
            .filter(|p| (p.x - x).abs() <= r)
            .collect();
        if near.len() <= best {
            continue;
        }
        for j in 0..=n {
            let y = j as f64 * step;
            let c = near
                .iter()
                .filter(|p| {
                    let dx = p.x - x;
                    let dy = p.y - y;
                    dx * dx + dy * dy <= r2
                })
                .count();
            best = best.max(c);
        }
    }
    best
}

fn encloses(center: (f64, f64), r: f64, points: &[Point2D]) -> bool {
    let slack = 1e-9 * r.max(1.0);
    points
        .iter()
        .all(|p| ((p.x - center.0).powi(2) + (p.y - center.1).powi(2)).sqrt() <= r + slack)
}

/// Smallest enclosing circle by exhaustive search over every point-pair
/// diameter circle and every point-triple circumcircle: O(n^4).
pub fn brute_force_sec(points: &[Point2D]) -> ((f64, f64), f64) {
    if points.len() == 1 {
        return ((points[0].x, points[0].y), 0.0);
    }
    let mut best: Option<((f64, f64), f64)> = None;
    let mut consider = |c: (f64, f64), r: f64| {
        if best.is_none_or(|(_, br)| r < br) && encloses(c, r, points) {
            best = Some((c, r));
        }
    };
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (points[i], points[j]);
            let c = ((a.x + b.x) / 2.0, (a.y + b.y) / 2.0);
            let r = ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt() / 2.0;
            consider(c, r);
            for &p in &points[j + 1..] {
                // Circumcenter from the perpendicular-bisector linear system.
                let (a1, b1) = (b.x - a.x, b.y - a.y);
                let (a2, b2) = (p.x - a.x, p.y - a.y);
                let c1 = (a1 * (a.x + b.x) + b1 * (a.y + b.y)) / 2.0;
                let c2 = (a2 * (a.x + p.x) + b2 * (a.y + p.y)) / 2.0;
                let det = a1 * b2 - a2 * b1;
                if det.abs() < 1e-12 {
                    continue;
                }
                let cx = (c1 * b2 - c2 * b1) / det;
                let cy = (a1 * c2 - a2 * c1) / det;
                let r = ((a.x - cx).powi(2) + (a.y - cy).powi(2)).sqrt();
                consider((cx, cy), r);
            }
        }
    }
    best.expect("some candidate encloses all points")
}
