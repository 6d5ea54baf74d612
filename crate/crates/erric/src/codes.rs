//! Domination and distinguishing predicates, the verifiers for the four
//! identifying-code variants, and exact share computation.
//!
//! A detector set S is judged per kind by two requirements:
//!
//! | kind    | domination          | distinguishing                                  |
//! |---------|---------------------|-------------------------------------------------|
//! | IC      | |N_S[v]| >= 1       | |N_S[u] xor N_S[v]| >= 1                        |
//! | RED:IC  | |N_S[v]| >= 2       | |N_S[u] xor N_S[v]| >= 2                        |
//! | DET:IC  | |N_S[v]| >= 2       | |N_S[u]-N_S[v]| >= 2 or |N_S[v]-N_S[u]| >= 2    |
//! | ERR:IC  | |N_S[v]| >= 3       | |N_S[u] xor N_S[v]| >= 3                        |
//!
//! Distinguishing is checked for every unordered pair, detectors included.

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CodeKind {
    Ic,
    RedIc,
    DetIc,
    ErrIc,
}

impl CodeKind {
    pub const ALL: [CodeKind; 4] = [CodeKind::Ic, CodeKind::RedIc, CodeKind::DetIc, CodeKind::ErrIc];

    pub fn domination_requirement(self) -> usize {
        match self {
            CodeKind::Ic => 1,
            CodeKind::RedIc | CodeKind::DetIc => 2,
            CodeKind::ErrIc => 3,
        }
    }

    pub fn parse(s: &str) -> Option<CodeKind> {
        match s.to_ascii_lowercase().as_str() {
            "ic" => Some(CodeKind::Ic),
            "red" | "red:ic" | "redic" => Some(CodeKind::RedIc),
            "det" | "det:ic" | "detic" => Some(CodeKind::DetIc),
            "err" | "err:ic" | "erric" => Some(CodeKind::ErrIc),
            _ => None,
        }
    }
}

impl std::fmt::Display for CodeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CodeKind::Ic => "IC",
            CodeKind::RedIc => "RED:IC",
            CodeKind::DetIc => "DET:IC",
            CodeKind::ErrIc => "ERR:IC",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DominationFailure {
    pub vertex: Vertex,
    pub count: usize,
    pub required: usize,
}

/// A pair that is insufficiently distinguished. `forward`/`backward` are
/// |N_S[u] - N_S[v]| and |N_S[v] - N_S[u]|; their sum is the symmetric
/// difference, so every reported failure is re-checkable from them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DistinguishingFailure {
    pub u: Vertex,
    pub v: Vertex,
    pub forward: usize,
    pub backward: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub valid: bool,
    pub kind: CodeKind,
    pub domination_failures: Vec<DominationFailure>,
    pub distinguishing_failures: Vec<DistinguishingFailure>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodesError {
    #[error("vertex {0} is not in the detector set")]
    NotADetector(Vertex),
    #[error("detector set does not dominate vertex {0}")]
    NotDominating(Vertex),
}

/// |N[v] ∩ S|.
pub fn domination_count(g: &Graph, s: &VertexSet, v: Vertex) -> usize {
    let mut count = usize::from(s.contains(v));
    count += g.neighbors(v).iter().filter(|&&w| s.contains(w)).count();
    count
}

/// |N_S[u] △ N_S[v]| where N_S[x] = N[x] ∩ S.
pub fn distinguishing_count(g: &Graph, s: &VertexSet, u: Vertex, v: Vertex) -> usize {
    assert_ne!(u, v, "distinguishing is defined on distinct vertices");
    let masks = g.closed_neighborhood_masks();
    let sbits = s.to_bitset(g.n());
    let (f, b) = directed_difference_counts(&masks[u], &masks[v], &sbits);
    f + b
}

fn directed_difference_counts(
    nu: &FixedBitSet,
    nv: &FixedBitSet,
    s: &FixedBitSet,
) -> (usize, usize) {
    let mut forward = 0;
    let mut backward = 0;
    for ((&wu, &wv), &ws) in nu.as_slice().iter().zip(nv.as_slice()).zip(s.as_slice()) {
        forward += ((wu & !wv) & ws).count_ones() as usize;
        backward += ((wv & !wu) & ws).count_ones() as usize;
    }
    (forward, backward)
}

/// Verifies S against one code kind, collecting every failing witness.
/// Invalid codes are reports, not errors.
pub fn verify_code(g: &Graph, s: &VertexSet, kind: CodeKind) -> VerificationReport {
    let masks = g.closed_neighborhood_masks();
    verify_code_with_masks(g, &masks, &s.to_bitset(g.n()), kind)
}

/// Mask-level verifier; callers that test many sets on one graph build the
/// neighborhood table once and loop over detector bitsets.
pub fn verify_code_with_masks(
    g: &Graph,
    masks: &[FixedBitSet],
    sbits: &FixedBitSet,
    kind: CodeKind,
) -> VerificationReport {
    let need_dom = kind.domination_requirement();
    let mut domination_failures = Vec::new();
    for v in 0..g.n() {
        let count = count_intersection(&masks[v], sbits);
        if count < need_dom {
            domination_failures.push(DominationFailure { vertex: v, count, required: need_dom });
        }
    }
    let mut distinguishing_failures = Vec::new();
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            let (forward, backward) = directed_difference_counts(&masks[u], &masks[v], sbits);
            let ok = match kind {
                CodeKind::Ic => forward + backward >= 1,
                CodeKind::RedIc => forward + backward >= 2,
                CodeKind::DetIc => forward >= 2 || backward >= 2,
                CodeKind::ErrIc => forward + backward >= 3,
            };
            if !ok {
                distinguishing_failures.push(DistinguishingFailure { u, v, forward, backward });
            }
        }
    }
    VerificationReport {
        valid: domination_failures.is_empty() && distinguishing_failures.is_empty(),
        kind,
        domination_failures,
        distinguishing_failures,
    }
}

/// Fast validity-only check used inside search loops.
pub fn is_valid_with_masks(
    n: usize,
    masks: &[FixedBitSet],
    sbits: &FixedBitSet,
    kind: CodeKind,
) -> bool {
    let need_dom = kind.domination_requirement();
    for v in 0..n {
        if count_intersection(&masks[v], sbits) < need_dom {
            return false;
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            let (f, b) = directed_difference_counts(&masks[u], &masks[v], sbits);
            let ok = match kind {
                CodeKind::Ic => f + b >= 1,
                CodeKind::RedIc => f + b >= 2,
                CodeKind::DetIc => f >= 2 || b >= 2,
                CodeKind::ErrIc => f + b >= 3,
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

pub(crate) fn count_intersection(a: &FixedBitSet, b: &FixedBitSet) -> usize {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(&x, &y)| (x & y).count_ones() as usize)
        .sum()
}

/// Share of a detector v: sh(v) = Σ_{u ∈ N[v]} 1/|N[u] ∩ S|, exact.
pub fn share(g: &Graph, s: &VertexSet, v: Vertex) -> Result<Rational, CodesError> {
    if !s.contains(v) {
        return Err(CodesError::NotADetector(v));
    }
    let mut total = Rational::zero();
    for u in g.closed_neighborhood(v).iter() {
        let dom = domination_count(g, s, u);
        if dom == 0 {
            return Err(CodesError::NotDominating(u));
        }
        total += Rational::recip_of(dom as i64);
    }
    Ok(total)
}
