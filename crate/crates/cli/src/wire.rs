//! JSON interchange types. Complex numbers are `[re, im]` pairs and matrices
//! are row-major.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sppt_core::{
    BipartiteState, BlockFactor, Classification, ComplexMatrix, ProductTerm, SeparableDecomposition,
    VerificationReport,
};

pub type Pair = [f64; 2];

fn pairs(v: &[Complex64]) -> Vec<Pair> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn complexes(v: &[Pair]) -> Vec<Complex64> {
    v.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Pair>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        MatrixJson { rows: m.rows(), cols: m.cols(), data: pairs(&m.to_row_major()) }
    }
}

impl TryFrom<&MatrixJson> for ComplexMatrix {
    type Error = sppt_core::Error;

    fn try_from(m: &MatrixJson) -> sppt_core::Result<Self> {
        ComplexMatrix::from_row_major(m.rows, m.cols, complexes(&m.data))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub dim_a: usize,
    pub dim_b: usize,
    pub normalized: bool,
    #[serde(flatten)]
    pub matrix: MatrixJson,
}

impl From<&BipartiteState> for StateJson {
    fn from(s: &BipartiteState) -> Self {
        StateJson {
            dim_a: s.dim_a(),
            dim_b: s.dim_b(),
            normalized: s.is_normalized(),
            matrix: s.matrix().into(),
        }
    }
}

impl TryFrom<&StateJson> for BipartiteState {
    type Error = sppt_core::Error;

    fn try_from(s: &StateJson) -> sppt_core::Result<Self> {
        BipartiteState::new(s.dim_a, s.dim_b, (&s.matrix).try_into()?, s.normalized)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SBlockJson {
    pub i: usize,
    pub j: usize,
    pub matrix: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorJson {
    pub dim_a: usize,
    pub dim_b: usize,
    pub x: Vec<MatrixJson>,
    pub s: Vec<SBlockJson>,
    pub basis: MatrixJson,
    #[serde(default)]
    pub reconstruction_residual: Option<f64>,
}

impl From<&BlockFactor> for FactorJson {
    fn from(f: &BlockFactor) -> Self {
        FactorJson {
            dim_a: f.dim_a(),
            dim_b: f.dim_b(),
            x: f.xs().iter().map(MatrixJson::from).collect(),
            s: f.s_blocks().iter().map(|(&(i, j), m)| SBlockJson { i, j, matrix: m.into() }).collect(),
            basis: f.basis().into(),
            reconstruction_residual: f.reconstruction_residual(),
        }
    }
}

impl TryFrom<&FactorJson> for BlockFactor {
    type Error = sppt_core::Error;

    fn try_from(f: &FactorJson) -> sppt_core::Result<Self> {
        let x = f.x.iter().map(ComplexMatrix::try_from).collect::<sppt_core::Result<Vec<_>>>()?;
        let mut s = BTreeMap::new();
        for b in &f.s {
            if s.insert((b.i, b.j), ComplexMatrix::try_from(&b.matrix)?).is_some() {
                return Err(sppt_core::Error::MalformedFactor(format!("duplicate S block ({}, {})", b.i, b.j)));
            }
        }
        Ok(BlockFactor::new(f.dim_a, f.dim_b, x, s, (&f.basis).try_into()?)?
            .with_reconstruction_residual(f.reconstruction_residual))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationJson {
    pub ppt: bool,
    pub ppt_min_eig: f64,
    pub sppt: bool,
    pub sppt_residual: f64,
    pub super_sppt: bool,
    pub ssppt_residual: f64,
    pub marginal: bool,
    pub tol: f64,
    pub basis: MatrixJson,
}

impl From<&Classification> for ClassificationJson {
    fn from(c: &Classification) -> Self {
        ClassificationJson {
            ppt: c.ppt,
            ppt_min_eig: c.ppt_min_eig,
            sppt: c.sppt,
            sppt_residual: c.sppt_residual,
            super_sppt: c.super_sppt,
            ssppt_residual: c.ssppt_residual,
            marginal: c.marginal,
            tol: c.tol,
            basis: (&c.basis).into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub weight: f64,
    pub vec_a: Vec<Pair>,
    pub vec_b: Vec<Pair>,
}

/// A decomposition together with the state it decomposes, so that `verify`
/// can run without a second input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub dim_a: usize,
    pub dim_b: usize,
    pub terms: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateJson>,
}

impl DecompositionJson {
    pub fn new(d: &SeparableDecomposition, state: Option<&BipartiteState>) -> Self {
        DecompositionJson {
            dim_a: d.dim_a,
            dim_b: d.dim_b,
            terms: d
                .terms
                .iter()
                .map(|t| TermJson { weight: t.weight, vec_a: pairs(&t.vec_a), vec_b: pairs(&t.vec_b) })
                .collect(),
            state: state.map(StateJson::from),
        }
    }

    pub fn decomposition(&self) -> SeparableDecomposition {
        SeparableDecomposition {
            dim_a: self.dim_a,
            dim_b: self.dim_b,
            terms: self
                .terms
                .iter()
                .map(|t| ProductTerm { weight: t.weight, vec_a: complexes(&t.vec_a), vec_b: complexes(&t.vec_b) })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationJson {
    pub passed: bool,
    pub residual: f64,
    pub min_weight: f64,
    pub negative_weights: Vec<usize>,
    pub max_norm_defect: f64,
    pub term_count: usize,
    pub tol: f64,
}

impl From<&VerificationReport> for VerificationJson {
    fn from(r: &VerificationReport) -> Self {
        VerificationJson {
            passed: r.passed,
            residual: r.residual,
            min_weight: r.min_weight,
            negative_weights: r.negative_weights.clone(),
            max_norm_defect: r.max_norm_defect,
            term_count: r.term_count,
            tol: r.tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchJson {
    pub found: bool,
    pub trials: usize,
    /// Trial index of the returned basis: the first success, or the best
    /// residual when nothing was found.
    pub trial: usize,
    pub basis: MatrixJson,
    pub classification: ClassificationJson,
}
