//! JSON file formats.
//!
//! Matrices are `{"rows", "cols", "data": [[re, im], ...]}` (row-major);
//! operators on `C^N ⊗ C^N` are plain `N² × N²` matrices. Involutions,
//! Q-system recipes, groups and multi-matrix algebras are described on
//! their types below.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::crossing::BipartiteOp;
use crate::error::{Error, Result};
use crate::modular::{involution_from_matrix_with, involution_from_parts_with, Involution};
use crate::qsystem::{from_cstar, qsystem_functions_on_group, qsystem_group_algebra, FiniteGroup, MultiMatrixAlgebra, QSystem};
use crate::tensor::{AntilinearOp, ComplexMatrix};
use crate::tol::Tolerances;

/// `{"kind": "parts", "j": Matrix, "delta": Matrix}` or
/// `{"kind": "matrix", "s": Matrix}`; antilinear maps are given by the
/// matrix `M` of `x ↦ M conj(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InvolutionSpec {
    Parts { j: ComplexMatrix, delta: ComplexMatrix },
    Matrix { s: ComplexMatrix },
}

impl InvolutionSpec {
    pub fn build(self, tol: Tolerances) -> Result<Involution> {
        match self {
            InvolutionSpec::Parts { j, delta } => {
                square(&j)?;
                square(&delta)?;
                involution_from_parts_with(AntilinearOp::new(j), delta, tol)
            }
            InvolutionSpec::Matrix { s } => {
                square(&s)?;
                involution_from_matrix_with(AntilinearOp::new(s), tol)
            }
        }
    }

    pub fn of(s: &Involution) -> Self {
        InvolutionSpec::Matrix { s: s.s().mat().clone() }
    }
}

fn square(m: &ComplexMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::Parse(format!("expected a square matrix, got {}x{}", m.rows(), m.cols())))
    }
}

/// A group by name (`"Z3"`, `"S3"`, `"D4"`) or by Cayley table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Name(String),
    Table(FiniteGroup),
}

impl GroupSpec {
    pub fn build(self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Name(n) => FiniteGroup::by_name(&n),
            GroupSpec::Table(g) => Ok(g),
        }
    }
}

/// One of `{"group-functions": G}`, `{"group-algebra": G}`,
/// `{"multimatrix": A}` or `{"raw": Q}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum QSystemSpec {
    GroupFunctions(GroupSpec),
    GroupAlgebra(GroupSpec),
    Multimatrix(MultiMatrixAlgebra),
    Raw(QSystem),
}

impl QSystemSpec {
    pub fn build(self, tol: Tolerances) -> Result<QSystem> {
        let q = match self {
            QSystemSpec::GroupFunctions(g) => qsystem_functions_on_group(&g.build()?),
            QSystemSpec::GroupAlgebra(g) => qsystem_group_algebra(&g.build()?),
            QSystemSpec::Multimatrix(a) => from_cstar(&a)?,
            QSystemSpec::Raw(q) => q,
        };
        Ok(q.with_tolerances(tol))
    }
}

pub fn from_json_str<T: DeserializeOwned>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Reads an `N² × N²` matrix as an operator on `C^N ⊗ C^N`.
pub fn read_operator(path: impl AsRef<Path>) -> Result<BipartiteOp> {
    BipartiteOp::new(read_json(path)?)
}

pub fn read_involution(path: impl AsRef<Path>, tol: Tolerances) -> Result<Involution> {
    read_json::<InvolutionSpec>(path)?.build(tol)
}
