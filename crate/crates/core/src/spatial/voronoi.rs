//! Voronoi cells clipped to a rectangle, by half-plane intersection.

use crate::error::{Error, Result};
use crate::geometry::Point2D;

use super::Region;

/// Normalization that maps the Voronoi-area coefficient of variation of a
/// Poisson point process to 1.
pub const POISSON_COV: f64 = 0.529;

/// Keep the part of a convex polygon that is closer to `p` than to `q`.
fn clip_to_bisector(poly: &[Point2D], p: Point2D, q: Point2D) -> Vec<Point2D> {
    let normal = q - p;
    let offset = normal.dot(p.midpoint(q));
    let side = |v: Point2D| normal.dot(v) - offset;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for (i, &a) in poly.iter().enumerate() {
        let b = poly[(i + 1) % poly.len()];
        let (sa, sb) = (side(a), side(b));
        if sa <= 0.0 {
            out.push(a);
        }
        if (sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0) {
            let t = sa / (sa - sb);
            out.push(a + (b - a) * t);
        }
    }
    out
}

fn polygon_area(poly: &[Point2D]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let twice: f64 = (0..n).map(|i| poly[i].cross(poly[(i + 1) % n])).sum();
    0.5 * twice.abs()
}

fn check_points(points: &[Point2D], region: &Region) -> Result<()> {
    if points.len() < 3 {
        return Err(Error::Degenerate(format!(
            "Voronoi CoV needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(p) = points.iter().find(|p| !region.contains(**p)) {
        return Err(Error::Degenerate(format!(
            "point ({}, {}) outside region",
            p.x, p.y
        )));
    }
    let origin = points[0];
    let far = points
        .iter()
        .copied()
        .max_by(|a, b| origin.dist_sq(*a).total_cmp(&origin.dist_sq(*b)))
        .unwrap();
    let axis = far - origin;
    let scale = axis.dot(axis);
    let collinear = scale == 0.0
        || points
            .iter()
            .all(|&p| axis.cross(p - origin).abs() <= 1e-12 * scale);
    if collinear {
        return Err(Error::Degenerate("points are collinear".into()));
    }
    Ok(())
}

/// Areas of the Voronoi cells of `points` clipped to `region`, in input order.
pub fn voronoi_cell_areas(points: &[Point2D], region: &Region) -> Result<Vec<f64>> {
    check_points(points, region)?;
    let corners = [
        Point2D::new(region.x_min, region.y_min),
        Point2D::new(region.x_max, region.y_min),
        Point2D::new(region.x_max, region.y_max),
        Point2D::new(region.x_min, region.y_max),
    ];
    let mut order: Vec<usize> = Vec::with_capacity(points.len());
    let mut areas = Vec::with_capacity(points.len());
    for (i, &p) in points.iter().enumerate() {
        order.clear();
        order.extend((0..points.len()).filter(|&j| j != i));
        order.sort_by(|&a, &b| p.dist_sq(points[a]).total_cmp(&p.dist_sq(points[b])));

        let mut cell = corners.to_vec();
        for &j in &order {
            let q = points[j];
            let d2 = p.dist_sq(q);
            if d2 == 0.0 {
                return Err(Error::Degenerate(format!(
                    "duplicate point ({}, {})",
                    p.x, p.y
                )));
            }
            // A bisector at distance |pq|/2 cannot cut a cell whose farthest
            // vertex is closer than that.
            let reach2 = cell.iter().map(|v| p.dist_sq(*v)).fold(0.0, f64::max);
            if d2 > 4.0 * reach2 {
                break;
            }
            cell = clip_to_bisector(&cell, p, q);
        }
        areas.push(polygon_area(&cell));
    }
    Ok(areas)
}

/// Heterogeneity of a point pattern: coefficient of variation of the
/// clipped Voronoi cell areas (population standard deviation), divided by
/// [`POISSON_COV`]. About 1 for Poisson points, 0 for a lattice, larger for
/// clustered users.
pub fn voronoi_cov(points: &[Point2D], region: &Region) -> Result<f64> {
    let areas = voronoi_cell_areas(points, region)?;
    let n = areas.len() as f64;
    let mean = areas.iter().sum::<f64>() / n;
    let var = areas.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / n;
    Ok(var.sqrt() / mean / POISSON_COV)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice(k: usize, side: f64) -> Vec<Point2D> {
        let step = side / k as f64;
        (0..k)
            .flat_map(|i| {
                (0..k).map(move |j| Point2D::new((i as f64 + 0.5) * step, (j as f64 + 0.5) * step))
            })
            .collect()
    }

    #[test]
    fn lattice_has_equal_cells() {
        let region = Region::square(3000.0);
        let pts = lattice(8, 3000.0);
        let areas = voronoi_cell_areas(&pts, &region).unwrap();
        for a in &areas {
            assert!((a - 3000.0 * 3000.0 / 64.0).abs() < 1e-6);
        }
        assert!(voronoi_cov(&pts, &region).unwrap() < 1e-9);
    }

    #[test]
    fn three_points_partition() {
        let region = Region::new(0.0, 10.0, 0.0, 10.0).unwrap();
        let pts = [
            Point2D::new(2.0, 2.0),
            Point2D::new(8.0, 2.0),
            Point2D::new(5.0, 9.0),
        ];
        let areas = voronoi_cell_areas(&pts, &region).unwrap();
        let total: f64 = areas.iter().sum();
        assert!((total - 100.0).abs() < 1e-9);
        assert!(areas.iter().all(|&a| a > 0.0));
        // Mirror symmetry about x = 5.
        assert!((areas[0] - areas[1]).abs() < 1e-9);
    }

    #[test]
    fn two_clusters_are_heterogeneous() {
        let region = Region::square(3000.0);
        let mut pts = Vec::new();
        for i in 0..20 {
            let t = i as f64 * 0.3;
            pts.push(Point2D::new(
                500.0 + 10.0 * t.cos() * (1.0 + 0.1 * i as f64),
                500.0 + 10.0 * t.sin(),
            ));
            pts.push(Point2D::new(
                2500.0 + 8.0 * t.sin(),
                2400.0 + 12.0 * t.cos() * (1.0 + 0.05 * i as f64),
            ));
        }
        assert!(voronoi_cov(&pts, &region).unwrap() > 1.0);
    }

    #[test]
    fn degenerate_inputs() {
        let region = Region::square(10.0);
        let two = [Point2D::new(1.0, 1.0), Point2D::new(2.0, 2.0)];
        assert!(matches!(
            voronoi_cov(&two, &region),
            Err(Error::Degenerate(_))
        ));
        let line = [
            Point2D::new(1.0, 1.0),
            Point2D::new(2.0, 2.0),
            Point2D::new(3.0, 3.0),
        ];
        assert!(matches!(
            voronoi_cov(&line, &region),
            Err(Error::Degenerate(_))
        ));
        let outside = [
            Point2D::new(1.0, 1.0),
            Point2D::new(2.0, 5.0),
            Point2D::new(30.0, 3.0),
        ];
        assert!(voronoi_cov(&outside, &region).is_err());
        let dup = [
            Point2D::new(1.0, 1.0),
            Point2D::new(1.0, 1.0),
            Point2D::new(3.0, 7.0),
        ];
        assert!(voronoi_cov(&dup, &region).is_err());
    }
}
