use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Point, UdgGraph, MAX_WEIGHT};
use crate::Error;

/// Attempts made by [`random_connected_topology`] before giving up.
pub const DEFAULT_CONNECT_ATTEMPTS: usize = 1000;

/// `n` points uniform in `[0,width]×[0,height]` with weights uniform in `[0, 0.8]`.
pub fn random_points<R: Rng>(n: usize, width: f64, height: f64, rng: &mut R) -> Vec<Point> {
    (0..n)
        .map(|_| {
            let x = rng.gen_range(0.0..=width);
            let y = rng.gen_range(0.0..=height);
            let w = rng.gen_range(0.0..=MAX_WEIGHT);
            Point::new(x, y, w)
        })
        .collect()
}

fn check_area(n: usize, width: f64, height: f64) -> Result<(), Error> {
    if n == 0 {
        return Err(Error::invalid("topology needs at least one node"));
    }
    if !(width.is_finite() && height.is_finite() && width >= 0.0 && height >= 0.0) {
        return Err(Error::invalid(
            "deployment area must be finite and non-negative",
        ));
    }
    Ok(())
}

/// One random deployment; not necessarily connected.
pub fn random_topology(
    n: usize,
    width: f64,
    height: f64,
    radius: f64,
    seed: u64,
) -> Result<UdgGraph, Error> {
    check_area(n, width, height)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    UdgGraph::new(random_points(n, width, height, &mut rng), radius)
}

/// Resamples deployments from one seeded stream until the graph is connected.
pub fn random_connected_topology(
    n: usize,
    width: f64,
    height: f64,
    radius: f64,
    seed: u64,
    max_attempts: usize,
) -> Result<UdgGraph, Error> {
    check_area(n, width, height)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..max_attempts {
        let g = UdgGraph::new(random_points(n, width, height, &mut rng), radius)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::GenerationFailure {
        attempts: max_attempts,
    })
}

fn lattice(rows: usize, cols: usize, spacing: f64) -> Result<Vec<Point>, Error> {
    if rows == 0 || cols == 0 {
        return Err(Error::invalid("grid needs at least one row and one column"));
    }
    if !spacing.is_finite() || spacing <= 0.0 {
        return Err(Error::invalid("grid spacing must be positive"));
    }
    Ok((0..rows)
        .flat_map(|i| (0..cols).map(move |j| Point::at(i as f64 * spacing, j as f64 * spacing)))
        .collect())
}

/// `rows×cols` lattice with node `i*cols + j` at `(i·spacing, j·spacing)` and zero weights.
pub fn grid_topology(
    rows: usize,
    cols: usize,
    spacing: f64,
    radius: f64,
) -> Result<UdgGraph, Error> {
    UdgGraph::new(lattice(rows, cols, spacing)?, radius)
}

/// Same lattice as [`grid_topology`] with seeded uniform weights in `[0, 0.8]`.
pub fn grid_topology_weighted(
    rows: usize,
    cols: usize,
    spacing: f64,
    radius: f64,
    seed: u64,
) -> Result<UdgGraph, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = lattice(rows, cols, spacing)?
        .into_iter()
        .map(|p| Point::new(p.x, p.y, rng.gen_range(0.0..=MAX_WEIGHT)))
        .collect();
    UdgGraph::new(points, radius)
}
