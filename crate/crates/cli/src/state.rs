use std::fs;

use log::info;
use spintomo_core::matrix::{werner_matrix, MatrixJson, DEFAULT_STATE_TOLERANCE};
use spintomo_core::{random_density, Basis, ComplexMatrix, DensityMatrix};

use crate::args::Rep;
use crate::Failure;

/// A matrix as read, before any validation.
#[derive(Debug, Clone)]
pub struct Input {
    pub matrix: ComplexMatrix,
    /// Basis declared by a JSON file, if any.
    pub declared: Option<Basis>,
    pub werner_p: Option<f64>,
    pub label: String,
}

impl Input {
    pub fn load(spec: Option<&str>, seed: Option<u64>) -> Result<Self, Failure> {
        let spec = spec.ok_or_else(|| Failure::Usage("--state is required".into()))?;
        if let Some(p) = spec.strip_prefix("werner:") {
            let p: f64 = p
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("cannot parse Werner parameter {p:?}")))?;
            if !p.is_finite() {
                return Err(Failure::Usage("Werner parameter must be finite".into()));
            }
            return Ok(Self {
                matrix: werner_matrix(p),
                declared: None,
                werner_p: Some(p),
                label: spec.to_string(),
            });
        }
        if spec == "mixed" {
            return Ok(Self {
                matrix: DensityMatrix::maximally_mixed(Basis::TwoQubit)
                    .matrix()
                    .to_owned(),
                declared: None,
                werner_p: None,
                label: spec.to_string(),
            });
        }
        if let Some(rest) = spec.strip_prefix("random") {
            let seed = match rest.strip_prefix(':') {
                Some(s) => s
                    .parse()
                    .map_err(|_| Failure::Usage(format!("cannot parse seed {s:?}")))?,
                None if rest.is_empty() => seed.unwrap_or(0),
                None => return Self::from_file(spec),
            };
            return Ok(Self {
                matrix: *random_density(4, seed)?.matrix(),
                declared: None,
                werner_p: None,
                label: format!("random:{seed}"),
            });
        }
        Self::from_file(spec)
    }

    fn from_file(path: &str) -> Result<Self, Failure> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?;
        let json = MatrixJson::parse(&text)?;
        let matrix = json.to_matrix()?;
        info!("read {}x{} matrix from {path}", matrix.dim(), matrix.dim());
        Ok(Self {
            matrix,
            declared: json.basis,
            werner_p: None,
            label: path.to_string(),
        })
    }

    /// `--rep` if given, else the declared basis, else two-qubit.
    pub fn representation(&self, rep: Option<Rep>) -> Result<Rep, Failure> {
        let declared = match self.declared {
            Some(Basis::TwoQubit) => Some(Rep::TwoQubit),
            Some(Basis::Qudit) => Some(Rep::Qudit),
            Some(Basis::Qubit) => {
                return Err(Failure::Usage(
                    "single-qubit states have no tomographic frame here".into(),
                ))
            }
            None => None,
        };
        match (rep, declared) {
            (Some(r), Some(d)) if r != d => Err(Failure::Usage(format!(
                "--rep {} does not match the file basis {}",
                rep_name(r),
                rep_name(d)
            ))),
            (Some(r), _) | (None, Some(r)) => Ok(r),
            (None, None) => Ok(Rep::TwoQubit),
        }
    }

    /// The validated state, labelled with the basis of `rep`.
    pub fn state(&self, rep: Rep) -> Result<DensityMatrix, Failure> {
        if self.matrix.dim() != 4 {
            return Err(Failure::Usage(format!(
                "expected a 4x4 state, found dimension {}",
                self.matrix.dim()
            )));
        }
        DensityMatrix::with_tolerance(self.matrix, basis(rep), DEFAULT_STATE_TOLERANCE)
            .map_err(|e| Failure::Usage(format!("{}: {e}", self.label)))
    }
}

pub fn basis(rep: Rep) -> Basis {
    match rep {
        Rep::TwoQubit => Basis::TwoQubit,
        Rep::Qudit => Basis::Qudit,
    }
}

pub fn rep_name(rep: Rep) -> &'static str {
    basis(rep).name()
}
