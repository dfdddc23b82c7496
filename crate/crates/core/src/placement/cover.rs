//! Maximal covering disk of fixed radius.
//!
//! Some optimal disk can always be translated until two covered users lie on
//! its boundary (or one, when it covers a single user). Enumerating the user
//! points and the pairwise intersections of radius-`r` circles around users
//! therefore visits an optimal center.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{Disk, Point2D};

use super::enclosing::smallest_enclosing_circle;

/// Slack on "inside the disk" decisions, m. Users on the border are covered.
pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CoverSolution {
    /// Disk of the requested radius at the chosen center.
    pub disk: Disk,
    /// Indices of covered users, ascending.
    pub covered: Vec<usize>,
    /// Smallest disk enclosing the covered users.
    pub enclosing: Disk,
}

impl CoverSolution {
    pub fn count(&self) -> usize {
        self.covered.len()
    }
}

fn candidate_centers(users: &[Point2D], r: f64) -> Vec<Point2D> {
    let mut out = users.to_vec();
    let limit = 2.0 * r;
    for (i, &p) in users.iter().enumerate() {
        for &q in &users[i + 1..] {
            let d = p.dist(q);
            if d == 0.0 || d > limit {
                continue;
            }
            let mid = p.midpoint(q);
            let half = 0.5 * d;
            let offset = (r * r - half * half).max(0.0).sqrt();
            let normal = Point2D::new(-(q.y - p.y) / d, (q.x - p.x) / d);
            out.push(mid + normal * offset);
            out.push(mid - normal * offset);
        }
    }
    out
}

/// Place a disk of radius `r` to cover the maximum number of users.
///
/// Among equally good centers, prefers the one whose covered set has the
/// smallest enclosing circle, then the lexicographically smallest center.
pub fn max_cover_disk(users: &[Point2D], r: f64) -> Result<CoverSolution> {
    if users.is_empty() {
        return Err(Error::EmptyInput("no users to cover"));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "cover radius must be positive, got {r}"
        )));
    }
    let reach = (r + BOUNDARY_TOL) * (r + BOUNDARY_TOL);
    let covers = |c: Point2D, u: Point2D| c.dist_sq(u) <= reach;

    let candidates = candidate_centers(users, r);
    let counts: Vec<usize> = candidates
        .iter()
        .map(|&c| users.iter().filter(|&&u| covers(c, u)).count())
        .collect();
    let best = *counts.iter().max().expect("at least one candidate");

    let mut enclosing_of: HashMap<Vec<usize>, Disk> = HashMap::new();
    let mut chosen: Option<(Point2D, Vec<usize>, Disk)> = None;
    for (&c, _) in candidates.iter().zip(&counts).filter(|(_, &n)| n == best) {
        let set: Vec<usize> = (0..users.len()).filter(|&i| covers(c, users[i])).collect();
        let enclosing = match enclosing_of.get(&set) {
            Some(d) => *d,
            None => {
                let pts: Vec<Point2D> = set.iter().map(|&i| users[i]).collect();
                let d = smallest_enclosing_circle(&pts)?;
                enclosing_of.insert(set.clone(), d);
                d
            }
        };
        let better = match &chosen {
            None => true,
            Some((bc, _, bd)) => enclosing
                .radius
                .total_cmp(&bd.radius)
                .then_with(|| c.lex_cmp(bc))
                .is_lt(),
        };
        if better {
            chosen = Some((c, set, enclosing));
        }
    }
    let (center, covered, enclosing) = chosen.expect("best count is attained");
    Ok(CoverSolution {
        disk: Disk::new(center, r),
        covered,
        enclosing,
    })
}
