use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{Basis, DensityMatrix};
use crate::su2::EulerAngles;

use super::{tomogram, FramePoint, FramePoint2Q, FramePointQudit, QuadratureGrid, Representation};

/// Exported values at or above this are clamped to zero when negative.
pub const EXPORT_CLAMP: f64 = -1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TomogramEntry {
    pub point: FramePoint,
    pub value: f64,
}

/// Evaluated tomogram values keyed by projections and angles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TomogramTable {
    representation: Representation,
    entries: Vec<TomogramEntry>,
}

fn representation_of(rho: &DensityMatrix) -> Result<Representation> {
    match rho.basis() {
        Basis::TwoQubit => Ok(Representation::TwoQubit),
        Basis::Qudit => Ok(Representation::Qudit),
        Basis::Qubit => Err(Error::RepresentationMismatch {
            expected: "two_qubit or qudit_3_2",
            found: "qubit",
        }),
    }
}

impl TomogramTable {
    /// Tomogram of `rho` at every projection and grid node.
    pub fn from_grid(rho: &DensityMatrix, grid: &QuadratureGrid) -> Result<Self> {
        let representation = representation_of(rho)?;
        super::check_grid(grid, representation.spheres())?;
        let nodes = grid.sphere_nodes();
        let mut points = Vec::new();
        match representation {
            Representation::TwoQubit => {
                for a in nodes {
                    for b in nodes {
                        points.extend(
                            FramePoint2Q::all_projections(a.angles(), b.angles())
                                .map(FramePoint::TwoQubit),
                        );
                    }
                }
            }
            Representation::Qudit => {
                for a in nodes {
                    points.extend(
                        FramePointQudit::all_projections(a.angles()).map(FramePoint::Qudit),
                    );
                }
            }
        }
        Self::from_points(rho, &points)
    }

    pub fn from_points(rho: &DensityMatrix, points: &[FramePoint]) -> Result<Self> {
        let representation = representation_of(rho)?;
        let entries = points
            .iter()
            .map(|p| {
                Ok(TomogramEntry {
                    point: *p,
                    value: tomogram(rho, p)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            representation,
            entries,
        })
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    pub fn entries(&self) -> &[TomogramEntry] {
        &self.entries
    }

    /// Largest `|Σ_projections ω − 1|` over the nodes fully present in the table.
    pub fn max_normalization_defect(&self) -> f64 {
        let mut sums: Vec<(Vec<EulerAngles>, f64, usize)> = Vec::new();
        for e in &self.entries {
            let key = angles_of(&e.point);
            match sums.iter_mut().find(|(k, _, _)| *k == key) {
                Some((_, s, n)) => {
                    *s += e.value;
                    *n += 1;
                }
                None => sums.push((key, e.value, 1)),
            }
        }
        sums.iter()
            .filter(|(_, _, n)| *n == 4)
            .map(|(_, s, _)| (s - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `(min, max)` of the raw values.
    pub fn value_range(&self) -> (f64, f64) {
        self.entries
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), e| {
                (lo.min(e.value), hi.max(e.value))
            })
    }

    /// CSV with a header row; tiny negative roundoff is clamped to zero.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match self.representation {
            Representation::TwoQubit => {
                out.push_str("representation,m1,m2,phi1,theta1,psi1,phi2,theta2,psi2,value\n")
            }
            Representation::Qudit => out.push_str("representation,m,alpha,beta,gamma,value\n"),
        }
        for e in &self.entries {
            let v = export_value(e.value);
            match &e.point {
                FramePoint::TwoQubit(p) => {
                    let _ = writeln!(
                        out,
                        "two_qubit,{},{},{},{},{},{},{},{},{}",
                        p.m1.value(),
                        p.m2.value(),
                        p.n1.first,
                        p.n1.second,
                        p.n1.third,
                        p.n2.first,
                        p.n2.second,
                        p.n2.third,
                        v
                    );
                }
                FramePoint::Qudit(p) => {
                    let _ = writeln!(
                        out,
                        "qudit,{},{},{},{},{}",
                        p.m.value(),
                        p.n.first,
                        p.n.second,
                        p.n.third,
                        v
                    );
                }
            }
        }
        out
    }

    /// JSON rows mirroring the CSV columns.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|e| match &e.point {
                FramePoint::TwoQubit(p) => serde_json::json!({
                    "m1": p.m1.value(), "m2": p.m2.value(),
                    "phi1": p.n1.first, "theta1": p.n1.second, "psi1": p.n1.third,
                    "phi2": p.n2.first, "theta2": p.n2.second, "psi2": p.n2.third,
                    "value": export_value(e.value),
                }),
                FramePoint::Qudit(p) => serde_json::json!({
                    "m": p.m.value(),
                    "alpha": p.n.first, "beta": p.n.second, "gamma": p.n.third,
                    "value": export_value(e.value),
                }),
            })
            .collect();
        serde_json::json!({
            "representation": self.representation.name(),
            "rows": rows,
        })
    }
}

fn export_value(v: f64) -> f64 {
    if (EXPORT_CLAMP..0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

fn angles_of(p: &FramePoint) -> Vec<EulerAngles> {
    match p {
        FramePoint::TwoQubit(p) => vec![p.n1, p.n2],
        FramePoint::Qudit(p) => vec![p.n],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::make_grid;
    use crate::matrix::{random_density, werner};

    #[test]
    fn grid_tables_are_normalized_probabilities() {
        let g2 = make_grid(8, 8, 2).unwrap();
        let g1 = make_grid(8, 8, 1).unwrap();
        for seed in 0..3 {
            let rho = random_density(4, seed).unwrap();
            let t = TomogramTable::from_grid(&rho, &g2).unwrap();
            assert_eq!(t.entries().len(), 4 * 4096);
            assert!(t.max_normalization_defect() < 1e-12);
            let (lo, hi) = t.value_range();
            assert!(lo >= -1e-12 && hi <= 1.0 + 1e-12);

            let q = rho.reinterpret(Basis::Qudit).unwrap();
            let t = TomogramTable::from_grid(&q, &g1).unwrap();
            assert_eq!(t.entries().len(), 4 * 64);
            assert!(t.max_normalization_defect() < 1e-12);
        }
    }

    #[test]
    fn csv_layout() {
        let rho = werner(0.5).unwrap().reinterpret(Basis::Qudit).unwrap();
        let t = TomogramTable::from_grid(&rho, &make_grid(8, 8, 1).unwrap()).unwrap();
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "representation,m,alpha,beta,gamma,value"
        );
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first.len(), 6);
        assert_eq!(first[0], "qudit");
        assert_eq!(first[1], "1.5");
        assert_eq!(csv.lines().count(), 1 + 256);
        let json = t.to_json();
        assert_eq!(json["rows"].as_array().unwrap().len(), 256);
    }

    #[test]
    fn clamps_only_tiny_negatives() {
        assert_eq!(export_value(-1e-13), 0.0);
        assert_eq!(export_value(-1e-6), -1e-6);
        assert_eq!(export_value(0.25), 0.25);
    }

    #[test]
    fn qubit_states_rejected() {
        let rho = random_density(2, 0).unwrap();
        assert!(TomogramTable::from_points(&rho, &[]).is_err());
    }
}
