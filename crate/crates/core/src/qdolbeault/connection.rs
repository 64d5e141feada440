use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{GradedMap, StructuredAlgebra, Witness};
use crate::linalg::unit_vector;

pub const DEL_BAR: &str = "del_bar";
pub const DEL_BAR_J: &str = "del_bar_J";
/// (1,0)-part of the connection on the full form model.
pub const DEL: &str = "del";

/// A finite model of the Dolbeault complex of a bundle with a connection.
///
/// `full` optionally carries the whole form algebra with the sl(2)-action
/// and J, sharing labels with `dolbeault` on the (0,*)-forms.
#[derive(Clone, Debug)]
pub struct ConnectionModel {
    dolbeault: StructuredAlgebra,
    full: Option<StructuredAlgebra>,
}

impl ConnectionModel {
    pub fn new(dolbeault: StructuredAlgebra, full: Option<StructuredAlgebra>) -> Result<Self> {
        dolbeault.differential(DEL_BAR)?;
        dolbeault.differential(DEL_BAR_J)?;
        if let Some(f) = &full {
            let names = f
                .sl2_names()
                .ok_or_else(|| Error::Invalid("full model lacks sl2 operators".into()))?;
            for n in [&names.e, &names.f, &names.h] {
                if f.map(n)?.shift() != 0 {
                    return Err(Error::WrongShift {
                        name: n.clone(),
                        shift: f.map(n)?.shift(),
                        expected: 0,
                    });
                }
            }
            let j = f
                .j_name()
                .ok_or_else(|| Error::Invalid("full model lacks a J map".into()))?;
            if f.map(j)?.shift() != 0 {
                return Err(Error::WrongShift {
                    name: j.to_string(),
                    shift: f.map(j)?.shift(),
                    expected: 0,
                });
            }
            let ds = dolbeault.space();
            for k in ds.degrees() {
                for l in ds.labels(k) {
                    match f.space().locate(l) {
                        Some((fk, _)) if fk == k => {}
                        _ => {
                            return Err(Error::Invalid(format!(
                                "Dolbeault label {l:?} missing from the full model in degree {k}"
                            )))
                        }
                    }
                }
            }
        }
        Ok(ConnectionModel { dolbeault, full })
    }

    pub fn dolbeault(&self) -> &StructuredAlgebra {
        &self.dolbeault
    }

    pub fn full(&self) -> Option<&StructuredAlgebra> {
        self.full.as_ref()
    }

    pub fn del_bar(&self) -> &GradedMap {
        self.dolbeault.map(DEL_BAR).expect("checked at construction")
    }

    pub fn del_bar_j(&self) -> &GradedMap {
        self.dolbeault.map(DEL_BAR_J).expect("checked at construction")
    }

    pub fn into_parts(self) -> (StructuredAlgebra, Option<StructuredAlgebra>) {
        (self.dolbeault, self.full)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub passed: bool,
    /// Basis vector on which the relation fails.
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutodualityReport {
    pub relations: Vec<RelationCheck>,
    /// All three relations hold; equivalently del_bar_J is a strong
    /// Maurer-Cartan element for the commutator with del_bar.
    pub autodual: bool,
}

pub fn relation_check(a: &StructuredAlgebra, relation: &str, op: &GradedMap) -> RelationCheck {
    let witness = op
        .first_nonzero()
        .map(|(k, j)| a.space().witness(k, &unit_vector(a.space().dim(k), j)));
    RelationCheck {
        relation: relation.to_string(),
        passed: witness.is_none(),
        witness,
    }
}

pub fn autoduality_check(m: &ConnectionModel) -> Result<AutodualityReport> {
    let a = m.dolbeault();
    let (p, r) = (m.del_bar(), m.del_bar_j());
    let relations = vec![
        relation_check(a, "del_bar^2 = 0", &p.compose(p)?),
        relation_check(a, "del_bar_J^2 = 0", &r.compose(r)?),
        relation_check(
            a,
            "del_bar del_bar_J + del_bar_J del_bar = 0",
            &p.compose(r)?.add(&r.compose(p)?)?,
        ),
    ];
    let autodual = relations.iter().all(|r| r.passed);
    Ok(AutodualityReport {
        relations,
        autodual,
    })
}
