use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::su2::EulerAngles;

/// Fewest azimuthal nodes for which every frame integrand is integrated exactly.
pub const MIN_AZIMUTH: usize = 8;
/// Fewest Gauss–Legendre nodes in `cos(polar)` for exact integration.
pub const MIN_POLAR: usize = 8;

/// One node on a single sphere. The weight already contains the `2π` from the
/// third Euler angle, which no frame operator depends on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereNode {
    pub azimuth: f64,
    pub polar: f64,
    pub weight: f64,
}

impl SphereNode {
    /// Angles with the azimuth first and the third angle set to zero.
    pub fn angles(&self) -> EulerAngles {
        EulerAngles {
            first: self.azimuth,
            second: self.polar,
            third: 0.0,
        }
    }
}

/// Product quadrature over one or two copies of the rotation-angle domain,
/// with total weight `8π²` per sphere.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureGrid {
    n_azimuth: usize,
    n_polar: usize,
    spheres: usize,
    nodes: Vec<SphereNode>,
}

impl QuadratureGrid {
    pub fn n_azimuth(&self) -> usize {
        self.n_azimuth
    }

    pub fn n_polar(&self) -> usize {
        self.n_polar
    }

    pub fn spheres(&self) -> usize {
        self.spheres
    }

    /// Nodes of one sphere factor.
    pub fn sphere_nodes(&self) -> &[SphereNode] {
        &self.nodes
    }

    /// Angle nodes of the full (product) grid.
    pub fn node_count(&self) -> usize {
        self.nodes.len().pow(self.spheres as u32)
    }

    pub fn sphere_weight(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight).sum()
    }

    /// Whether the node counts meet the exactness minimum.
    pub fn is_exact(&self) -> bool {
        self.n_azimuth >= MIN_AZIMUTH && self.n_polar >= MIN_POLAR
    }

    pub(crate) fn require_exact(&self) -> Result<()> {
        if self.n_azimuth < MIN_AZIMUTH {
            return Err(Error::CoarseGrid {
                what: "n_azimuth",
                got: self.n_azimuth,
                min: MIN_AZIMUTH,
            });
        }
        if self.n_polar < MIN_POLAR {
            return Err(Error::CoarseGrid {
                what: "n_polar",
                got: self.n_polar,
                min: MIN_POLAR,
            });
        }
        Ok(())
    }

    /// Builds a grid without enforcing the node minimum. Operations that need
    /// exact integration still reject it.
    pub fn unchecked(n_azimuth: usize, n_polar: usize, spheres: usize) -> Result<Self> {
        if !(1..=2).contains(&spheres) {
            return Err(Error::Domain {
                name: "spheres",
                value: spheres as f64,
                min: 1.0,
                max: 2.0,
            });
        }
        if n_azimuth == 0 || n_polar == 0 {
            return Err(Error::CoarseGrid {
                what: "nodes",
                got: 0,
                min: 1,
            });
        }
        let (x, w) = gauss_legendre(n_polar);
        let az_weight = TAU / n_azimuth as f64;
        let mut nodes = Vec::with_capacity(n_azimuth * n_polar);
        for k in 0..n_azimuth {
            let azimuth = TAU * k as f64 / n_azimuth as f64;
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(SphereNode {
                    azimuth,
                    polar: xi.acos(),
                    weight: az_weight * wi * TAU,
                });
            }
        }
        Ok(Self {
            n_azimuth,
            n_polar,
            spheres,
            nodes,
        })
    }
}

/// Uniform azimuthal nodes × Gauss–Legendre nodes in `cos(polar)`, per sphere.
pub fn make_grid(n_azimuth: usize, n_polar: usize, spheres: usize) -> Result<QuadratureGrid> {
    let grid = QuadratureGrid::unchecked(n_azimuth, n_polar, spheres)?;
    grid.require_exact()?;
    Ok(grid)
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`, nodes descending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            // Legendre P_n(z) and its derivative by recurrence.
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in [1, 2, 5, 8, 12] {
            let (x, w) = gauss_legendre(n);
            for deg in 0..(2 * n) {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let want = if deg % 2 == 1 {
                    0.0
                } else {
                    2.0 / (deg as f64 + 1.0)
                };
                assert!((got - want).abs() < 1e-13, "n={n} deg={deg}: {got}");
            }
        }
    }

    #[test]
    fn sphere_weight_is_8pi2() {
        for (a, p) in [(8, 8), (9, 11), (16, 8)] {
            let g = make_grid(a, p, 1).unwrap();
            assert!((g.sphere_weight() - 8.0 * PI * PI).abs() < 1e-10);
            assert!(g.sphere_nodes().iter().all(|n| n.weight > 0.0));
        }
    }

    #[test]
    fn integrates_sin2_cos3_to_zero() {
        let g = make_grid(8, 8, 1).unwrap();
        let s: f64 = g
            .sphere_nodes()
            .iter()
            .map(|n| n.weight * n.polar.sin().powi(2) * (3.0 * n.azimuth).cos())
            .sum();
        assert!(s.abs() < 1e-12);
        // and a non-vanishing one: ∫ cos²β dn = 8π²/3
        let s: f64 = g
            .sphere_nodes()
            .iter()
            .map(|n| n.weight * n.polar.cos().powi(2))
            .sum();
        assert!((s - 8.0 * PI * PI / 3.0).abs() < 1e-10);
    }

    #[test]
    fn product_grid_count() {
        assert_eq!(make_grid(8, 8, 2).unwrap().node_count(), 4096);
        assert_eq!(make_grid(8, 8, 1).unwrap().node_count(), 64);
    }

    #[test]
    fn coarse_grids_rejected() {
        assert!(matches!(make_grid(7, 8, 1), Err(Error::CoarseGrid { .. })));
        assert!(matches!(make_grid(8, 4, 2), Err(Error::CoarseGrid { .. })));
        assert!(make_grid(8, 8, 3).is_err());
        let g = QuadratureGrid::unchecked(4, 4, 1).unwrap();
        assert!(!g.is_exact());
    }
}
