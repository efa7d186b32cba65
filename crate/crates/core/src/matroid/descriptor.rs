use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use super::Matroid;
use crate::error::{Error, Result};
use crate::set::ElementSet;

/// Declarative description of a matroid. With the `serde` feature this maps
/// onto the JSON form `{"type": "uniform", "n": 4, "k": 2}` and friends.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "type", rename_all = "snake_case", deny_unknown_fields))]
pub enum MatroidDescriptor {
    Free {
        n: usize,
    },
    Uniform {
        n: usize,
        k: usize,
    },
    Partition {
        classes: Vec<Vec<usize>>,
        bounds: Vec<usize>,
    },
    Laminar {
        n: usize,
        sets: Vec<LaminarSet>,
    },
    Transversal {
        n: usize,
        sets: Vec<Vec<usize>>,
    },
    Graphic {
        vertices: usize,
        edges: Vec<[usize; 2]>,
    },
    Dual {
        inner: Box<MatroidDescriptor>,
    },
    Delete {
        inner: Box<MatroidDescriptor>,
        elements: Vec<usize>,
    },
    Contract {
        inner: Box<MatroidDescriptor>,
        elements: Vec<usize>,
    },
    /// Copy of `elements[j]` gets index `n + j`.
    Parallel {
        inner: Box<MatroidDescriptor>,
        elements: Vec<usize>,
    },
    DirectSum {
        parts: Vec<MatroidDescriptor>,
    },
    /// Exactly two parts on a common ground set.
    Union {
        parts: Vec<MatroidDescriptor>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct LaminarSet {
    pub members: Vec<usize>,
    pub cap: usize,
}

fn element_set(inner: &Matroid, elements: &[usize]) -> Result<ElementSet> {
    let set = ElementSet::from_iter_unsorted(elements.iter().copied());
    if let Some(m) = set.max_element().filter(|&m| m >= inner.n()) {
        return Err(Error::MalformedDescriptor(format!(
            "element {m} outside inner ground set of size {}",
            inner.n()
        )));
    }
    Ok(set)
}

impl MatroidDescriptor {
    /// Validates the descriptor and builds the oracle.
    pub fn build(&self) -> Result<Matroid> {
        match self {
            MatroidDescriptor::Free { n } => Ok(Matroid::free(*n)),
            MatroidDescriptor::Uniform { n, k } => Matroid::uniform(*n, *k),
            MatroidDescriptor::Partition { classes, bounds } => Matroid::partition(classes, bounds),
            MatroidDescriptor::Laminar { n, sets } => {
                let sets: Vec<(Vec<usize>, usize)> =
                    sets.iter().map(|s| (s.members.clone(), s.cap)).collect();
                Matroid::laminar(*n, &sets)
            }
            MatroidDescriptor::Transversal { n, sets } => Matroid::transversal(*n, sets),
            MatroidDescriptor::Graphic { vertices, edges } => {
                let edges: Vec<(usize, usize)> = edges.iter().map(|e| (e[0], e[1])).collect();
                Matroid::graphic(*vertices, &edges)
            }
            MatroidDescriptor::Dual { inner } => Ok(inner.build()?.dual()),
            MatroidDescriptor::Delete { inner, elements } => {
                let m = inner.build()?;
                let t = element_set(&m, elements)?;
                m.delete(&t)
            }
            MatroidDescriptor::Contract { inner, elements } => {
                let m = inner.build()?;
                let t = element_set(&m, elements)?;
                m.contract(&t)
            }
            MatroidDescriptor::Parallel { inner, elements } => {
                let m = inner.build()?;
                element_set(&m, elements)?;
                m.add_parallel(elements)
            }
            MatroidDescriptor::DirectSum { parts } => {
                let built = parts.iter().map(Self::build).collect::<Result<Vec<_>>>()?;
                Ok(Matroid::direct_sum(&built))
            }
            MatroidDescriptor::Union { parts } => {
                if parts.len() != 2 {
                    return Err(Error::MalformedDescriptor(format!(
                        "union needs exactly 2 parts, got {}",
                        parts.len()
                    )));
                }
                let a = parts[0].build()?;
                let b = parts[1].build()?;
                Matroid::union(&a, &b).map_err(|_| {
                    Error::MalformedDescriptor(format!(
                        "union parts have ground sizes {} and {}",
                        a.n(),
                        b.n()
                    ))
                })
            }
        }
    }
}

/// Builds a matroid from its descriptor.
pub fn build_matroid(d: &MatroidDescriptor) -> Result<Matroid> {
    d.build()
}
