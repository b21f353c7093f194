//! Declarative JSON instance documents and their validated in-memory forms.

use crate::corr::{CorrError, FinCorr, Ideal};
use crate::digraph::{Edge, GraphError, MultiDigraph, MultivaluedMap};
use crate::fintop::{self, FinTopSpace, TopologyError};
use crate::mask::{self, Mask};
use crate::verdict::{EndoSystem, FinQuiver, QuiverEdge, VerdictError};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("could not parse the instance file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Corr(#[from] CorrError),
    #[error(transparent)]
    System(#[from] VerdictError),
    #[error("point {index} is out of range for {points} points")]
    PointOutOfRange { index: u32, points: u32 },
    #[error("the set {0:?} is not open in the given topology")]
    NotOpen(Vec<u32>),
    #[error("key {key:?} is not a point index")]
    BadKey { key: String },
    #[error("edge {edge} has malformed weight {got:?}: expected a plain decimal numeral")]
    BadWeight { edge: usize, got: String },
    #[error("this command needs a {expected} instance, found {got}")]
    WrongKind { expected: &'static str, got: &'static str },
}

/// The on-disk schema. Payload layout per kind matches the documented file
/// format exactly; unknown fields are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InstanceDoc {
    Graph {
        points: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        opens: Option<Vec<Vec<u32>>>,
        edges: Vec<(u32, u32)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        u: Option<Vec<u32>>,
    },
    Mvmap {
        points: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        opens: Option<Vec<Vec<u32>>>,
        map: BTreeMap<String, Vec<u32>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        u: Option<Vec<u32>>,
    },
    Correspondence {
        dims: Vec<u64>,
        mult: Vec<Vec<u64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ideal: Option<Vec<u32>>,
    },
    Quiver {
        vertices: u32,
        edges: Vec<QuiverEdgeDoc>,
    },
    Endomorphism {
        points: u32,
        phi: BTreeMap<String, String>,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        index: BTreeMap<String, u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ideal: Option<Vec<u32>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverEdgeDoc {
    pub src: u32,
    pub rng: u32,
    pub weight: String,
}

/// A validated instance ready to analyze. The ideal of a correspondence
/// defaults to the largest admissible one when the file omits it.
pub enum Instance {
    Graph { graph: MultiDigraph, u: Mask },
    Map { map: MultivaluedMap, u: Mask },
    Correspondence { corr: FinCorr, ideal: Ideal },
    Quiver { quiver: FinQuiver },
    Endomorphism { corr: FinCorr, ideal: Ideal },
}

impl InstanceDoc {
    pub fn parse(text: &str) -> Result<InstanceDoc, InputError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            InstanceDoc::Graph { .. } => "graph",
            InstanceDoc::Mvmap { .. } => "mvmap",
            InstanceDoc::Correspondence { .. } => "correspondence",
            InstanceDoc::Quiver { .. } => "quiver",
            InstanceDoc::Endomorphism { .. } => "endomorphism",
        }
    }

    pub fn resolve(&self) -> Result<Instance, InputError> {
        match self {
            InstanceDoc::Graph { points, opens, edges, u } => {
                let space = build_space(*points, opens.as_deref())?;
                let u = resolve_open(&space, u.as_deref())?;
                let edges = edges
                    .iter()
                    .map(|&(src, rng)| Edge { src, rng })
                    .collect();
                let graph = MultiDigraph::new(space, edges)?;
                Ok(Instance::Graph { graph, u })
            }
            InstanceDoc::Mvmap { points, opens, map, u } => {
                let space = build_space(*points, opens.as_deref())?;
                let u = resolve_open(&space, u.as_deref())?;
                let mut targets = vec![0 as Mask; *points as usize];
                for (key, values) in map {
                    let src = parse_point(key, *points)?;
                    targets[src as usize] = point_set(values, *points)?;
                }
                let map = MultivaluedMap::new(space, targets)?;
                Ok(Instance::Map { map, u })
            }
            InstanceDoc::Correspondence { dims, mult, ideal } => {
                let corr = FinCorr::new(dims.clone(), mult.clone())?;
                let ideal = resolve_ideal(&corr, ideal.as_deref())?;
                Ok(Instance::Correspondence { corr, ideal })
            }
            InstanceDoc::Quiver { vertices, edges } => {
                let edges = edges
                    .iter()
                    .enumerate()
                    .map(|(id, e)| {
                        Ok(QuiverEdge {
                            src: e.src,
                            rng: e.rng,
                            weight: parse_decimal(&e.weight).ok_or_else(|| {
                                InputError::BadWeight { edge: id, got: e.weight.clone() }
                            })?,
                        })
                    })
                    .collect::<Result<Vec<_>, InputError>>()?;
                let quiver = FinQuiver::new(*vertices, edges)?;
                Ok(Instance::Quiver { quiver })
            }
            InstanceDoc::Endomorphism { points, phi, index, ideal } => {
                let n = *points;
                let mut phi_table = vec![None; n as usize];
                for (key, value) in phi {
                    let x = parse_point(key, n)?;
                    let y = parse_point(value, n)?;
                    phi_table[x as usize] = Some(y);
                }
                let mut index_table = vec![1u64; n as usize];
                for (key, &value) in index {
                    let x = parse_point(key, n)?;
                    index_table[x as usize] = value;
                }
                let system = EndoSystem::new(n, phi_table, index_table)?;
                let corr = crate::verdict::from_endomorphism(&system);
                let ideal = resolve_ideal(&corr, ideal.as_deref())?;
                Ok(Instance::Endomorphism { corr, ideal })
            }
        }
    }
}

fn build_space(points: u32, opens: Option<&[Vec<u32>]>) -> Result<FinTopSpace, InputError> {
    match opens {
        None => Ok(FinTopSpace::discrete(points)?),
        Some(family) => {
            let generators = family
                .iter()
                .map(|open| point_set(open, points))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(fintop::make_space(points, &generators)?)
        }
    }
}

fn resolve_open(space: &FinTopSpace, u: Option<&[u32]>) -> Result<Mask, InputError> {
    match u {
        None => Ok(space.full()),
        Some(points) => {
            let m = point_set(points, space.n_points())?;
            if !space.is_open(m) {
                return Err(InputError::NotOpen(mask::to_sorted_vec(m)));
            }
            Ok(m)
        }
    }
}

fn resolve_ideal(corr: &FinCorr, ideal: Option<&[u32]>) -> Result<Ideal, InputError> {
    match ideal {
        None => Ok(corr.jx()),
        Some(points) => point_set(points, corr.k()),
    }
}

fn point_set(points: &[u32], n: u32) -> Result<Mask, InputError> {
    let mut m: Mask = 0;
    for &p in points {
        if p >= n {
            return Err(InputError::PointOutOfRange { index: p, points: n });
        }
        m |= mask::bit(p);
    }
    Ok(m)
}

fn parse_point(key: &str, n: u32) -> Result<u32, InputError> {
    let index: u32 = key
        .parse()
        .map_err(|_| InputError::BadKey { key: key.to_string() })?;
    if index >= n {
        return Err(InputError::PointOutOfRange { index, points: n });
    }
    Ok(index)
}

/// Parses a plain decimal numeral (optional sign, digits, optional fraction
/// part) into an exact rational. Exponent forms are rejected.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = digits.parse().ok()?;
    if negative {
        numer = -numer;
    }
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    Some(BigRational::new(numer, denom))
}
