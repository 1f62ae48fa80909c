//! Forbidden-structure families with decidable containment.
//!
//! A [`ForbiddenFamily`] pairs a symbolic family kind with a uniformity and
//! answers "does this host contain a member as a subgraph?" totally, with a
//! [`Witness`] on every positive answer. Witnesses re-validate against the
//! host in time polynomial in their own size, independently of the search
//! that produced them.

pub mod berge;
pub mod canon;
pub mod f5;
pub mod local_iso;
pub mod loose;
pub mod naive;
pub mod project;
pub mod subiso;
pub mod sunflower;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{intersect_sorted, Hypergraph};

/// Restriction of a host to a subset of live edges; detectors search only
/// live edges, which lets the oracle probe subgraphs without copying.
#[derive(Clone, Copy)]
pub(crate) struct View<'a> {
    pub h: &'a Hypergraph,
    pub alive: Option<&'a [bool]>,
}

impl<'a> View<'a> {
    pub fn full(h: &'a Hypergraph) -> Self {
        View { h, alive: None }
    }

    pub fn is_alive(&self, id: usize) -> bool {
        self.alive.map_or(true, |m| m[id])
    }

    pub fn live_count(&self) -> usize {
        match self.alive {
            None => self.h.edge_count(),
            Some(m) => m.iter().filter(|&&b| b).count(),
        }
    }

    pub fn live_edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.h.edge_count()).filter(move |&id| self.is_alive(id))
    }

    pub fn live_incident(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.h.incident(v).iter().copied().filter(move |&id| self.is_alive(id))
    }
}

/// Symbolic description of a family of r-graphs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum FamilyKind {
    /// Berge cycles of length exactly `ell`.
    BergeCycle(usize),
    /// Berge cycles of every length from 2 through `ell`.
    BergeUpTo(usize),
    /// Berge cycles of length `ell` that are not sunflowers.
    BergeNoSunflower(usize),
    /// Non-sunflower Berge cycles of every length from 2 through `ell`.
    BergeUpToNoSunflower(usize),
    /// The loose cycle with `ell` edges.
    LooseCycle(usize),
    /// Sunflowers on 2..=`ell` edges extended by one extra edge that meets
    /// the kernel without the union being a sunflower.
    SunflowerPlus(usize),
    /// The four-edge 3-graph on six vertices from [`f5::pattern`].
    F5,
    Union(Vec<FamilyKind>),
    ExplicitPatterns(Vec<Hypergraph>),
}

/// A family kind bound to a uniformity, with a total containment predicate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForbiddenFamily {
    kind: FamilyKind,
    r: usize,
}

impl ForbiddenFamily {
    pub fn new(kind: FamilyKind, r: usize) -> Result<Self> {
        if r < 1 {
            return Err(Error::invalid("family uniformity must be at least 1"));
        }
        validate_kind(&kind, r)?;
        Ok(ForbiddenFamily { kind, r })
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn uniformity(&self) -> usize {
        self.r
    }

    /// Parses specs like `berge:4`, `berge-upto:4`, `berge-nosun:4`,
    /// `berge-upto-nosun:4`, `loose:3`, `sunflower-plus:4`, `f5`, and
    /// `union(a;b)`.
    pub fn parse(s: &str, r: usize) -> Result<Self> {
        Self::new(parse_kind(s.trim())?, r)
    }

    /// Canonical string used for cache keys and reports.
    pub fn canonical_string(&self) -> String {
        format!("r{}|{}", self.r, kind_string(&self.kind))
    }

    /// Finds a member occurring as a subgraph, with a checkable witness.
    pub fn find_in(&self, h: &Hypergraph) -> Option<Witness> {
        self.find_in_masked(h, None, None)
    }

    pub fn is_free(&self, h: &Hypergraph) -> bool {
        self.find_in(h).is_none()
    }

    /// As [`ForbiddenFamily::find_in`], restricted to live edges; when
    /// `required` is set, only witnesses using that edge are reported.
    pub fn find_in_masked(
        &self,
        h: &Hypergraph,
        alive: Option<&[bool]>,
        required: Option<usize>,
    ) -> Option<Witness> {
        if h.uniformity() != self.r {
            return None;
        }
        let view = View { h, alive };
        find_kind(&self.kind, view, required)
    }
}

fn validate_kind(kind: &FamilyKind, r: usize) -> Result<()> {
    match kind {
        FamilyKind::BergeCycle(l)
        | FamilyKind::BergeUpTo(l)
        | FamilyKind::BergeNoSunflower(l)
        | FamilyKind::BergeUpToNoSunflower(l)
        | FamilyKind::SunflowerPlus(l) => {
            if *l < 2 {
                return Err(Error::invalid("Berge and sunflower-plus families need ell >= 2"));
            }
        }
        FamilyKind::LooseCycle(l) => {
            if *l < 3 {
                return Err(Error::invalid("loose cycles need ell >= 3"));
            }
        }
        FamilyKind::F5 => {
            if r != 3 {
                return Err(Error::invalid("the F5 pattern is 3-uniform"));
            }
        }
        FamilyKind::Union(kinds) => {
            if kinds.is_empty() {
                return Err(Error::invalid("union family must be nonempty"));
            }
            for k in kinds {
                validate_kind(k, r)?;
            }
        }
        FamilyKind::ExplicitPatterns(pats) => {
            if pats.is_empty() {
                return Err(Error::invalid("pattern family must be nonempty"));
            }
            if pats.iter().any(|p| p.uniformity() != r || p.edge_count() == 0) {
                return Err(Error::invalid("patterns must match the uniformity and be nonempty"));
            }
        }
    }
    Ok(())
}

fn parse_kind(s: &str) -> Result<FamilyKind> {
    if s == "f5" {
        return Ok(FamilyKind::F5);
    }
    if let Some(body) = s.strip_prefix("union(").and_then(|rest| rest.strip_suffix(')')) {
        let kinds = body
            .split(';')
            .map(|part| parse_kind(part.trim()))
            .collect::<Result<Vec<_>>>()?;
        return Ok(FamilyKind::Union(kinds));
    }
    let (name, arg) = s
        .split_once(':')
        .ok_or_else(|| Error::parse(format!("family spec {:?} missing ':'", s)))?;
    let ell: usize = arg
        .trim()
        .parse()
        .map_err(|_| Error::parse(format!("bad cycle length {:?}", arg)))?;
    match name {
        "berge" => Ok(FamilyKind::BergeCycle(ell)),
        "berge-upto" => Ok(FamilyKind::BergeUpTo(ell)),
        "berge-nosun" => Ok(FamilyKind::BergeNoSunflower(ell)),
        "berge-upto-nosun" => Ok(FamilyKind::BergeUpToNoSunflower(ell)),
        "loose" => Ok(FamilyKind::LooseCycle(ell)),
        "sunflower-plus" => Ok(FamilyKind::SunflowerPlus(ell)),
        other => Err(Error::parse(format!("unknown family kind {:?}", other))),
    }
}

fn kind_string(kind: &FamilyKind) -> String {
    match kind {
        FamilyKind::BergeCycle(l) => format!("berge:{}", l),
        FamilyKind::BergeUpTo(l) => format!("berge-upto:{}", l),
        FamilyKind::BergeNoSunflower(l) => format!("berge-nosun:{}", l),
        FamilyKind::BergeUpToNoSunflower(l) => format!("berge-upto-nosun:{}", l),
        FamilyKind::LooseCycle(l) => format!("loose:{}", l),
        FamilyKind::SunflowerPlus(l) => format!("sunflower-plus:{}", l),
        FamilyKind::F5 => "f5".to_string(),
        FamilyKind::Union(kinds) => {
            let mut parts: Vec<String> = kinds.iter().map(kind_string).collect();
            parts.sort();
            format!("union({})", parts.join(";"))
        }
        FamilyKind::ExplicitPatterns(pats) => {
            let mut keys: Vec<String> = pats
                .iter()
                .map(|p| format!("{:016x}", canon::canonical_hash(p)))
                .collect();
            keys.sort();
            format!("patterns({})", keys.join(";"))
        }
    }
}

fn find_kind(kind: &FamilyKind, view: View<'_>, required: Option<usize>) -> Option<Witness> {
    match kind {
        FamilyKind::BergeCycle(l) => berge::find(view, *l, false, required),
        FamilyKind::BergeUpTo(l) => (2..=*l).find_map(|ell| berge::find(view, ell, false, required)),
        FamilyKind::BergeNoSunflower(l) => berge::find(view, *l, true, required),
        // two-edge witnesses are always sunflowers, so start at length 3
        FamilyKind::BergeUpToNoSunflower(l) => {
            (3..=*l).find_map(|ell| berge::find(view, ell, true, required))
        }
        FamilyKind::LooseCycle(l) => loose::find(view, *l, required),
        FamilyKind::SunflowerPlus(_) => sunflower::find_plus(view, required),
        FamilyKind::F5 => subiso::find_embedding(view, &f5::pattern(), required),
        FamilyKind::Union(kinds) => kinds.iter().find_map(|k| find_kind(k, view, required)),
        FamilyKind::ExplicitPatterns(pats) => {
            pats.iter().find_map(|p| subiso::find_embedding(view, p, required))
        }
    }
}

/// Certificate that a family member occurs in a host.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Witness {
    /// Core vertices `v_1..v_l` with distinct edges `e_1..e_l` such that
    /// `v_i, v_{i+1}` lie in `e_i` (cyclically).
    BergeCycle { core: Vec<usize>, edges: Vec<usize> },
    /// Edge ids around the cycle together with the shared link vertices;
    /// `links[i]` is the single vertex of `edges[i] ∩ edges[i+1]`.
    LooseCycle { edges: Vec<usize>, links: Vec<usize> },
    /// Two-edge sunflower plus an extra edge meeting its kernel, the three
    /// edges together not forming a sunflower.
    SunflowerPlus { sunflower: Vec<usize>, extra: usize, kernel: Vec<usize> },
    /// An injective embedding of `pattern`; `vertex_map[p]` is the host
    /// vertex carrying pattern vertex `p`, `edges[j]` the host edge id
    /// carrying pattern edge `j`.
    Embedding { pattern: Hypergraph, vertex_map: Vec<usize>, edges: Vec<usize> },
}

impl Witness {
    /// Host edge ids involved in the certificate.
    pub fn edge_ids(&self) -> Vec<usize> {
        let mut ids = match self {
            Witness::BergeCycle { edges, .. } => edges.clone(),
            Witness::LooseCycle { edges, .. } => edges.clone(),
            Witness::SunflowerPlus { sunflower, extra, .. } => {
                let mut v = sunflower.clone();
                v.push(*extra);
                v
            }
            Witness::Embedding { edges, .. } => edges.clone(),
        };
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Re-checks the certificate against the host, independent of any
    /// search state. This validates structure only; whether the structure
    /// belongs to a particular family is checked by
    /// [`Witness::certifies`].
    pub fn validate(&self, h: &Hypergraph) -> bool {
        match self {
            Witness::BergeCycle { core, edges } => {
                let l = core.len();
                if l < 2 || edges.len() != l {
                    return false;
                }
                if !distinct(core) || !distinct(edges) {
                    return false;
                }
                if edges.iter().any(|&e| e >= h.edge_count()) || core.iter().any(|&v| v >= h.vertex_count()) {
                    return false;
                }
                (0..l).all(|i| {
                    let e = h.edge(edges[i]);
                    e.contains(&core[i]) && e.contains(&core[(i + 1) % l])
                })
            }
            Witness::LooseCycle { edges, links } => {
                let l = edges.len();
                if l < 3 || links.len() != l || !distinct(edges) || !distinct(links) {
                    return false;
                }
                if edges.iter().any(|&e| e >= h.edge_count()) {
                    return false;
                }
                for i in 0..l {
                    for j in i + 1..l {
                        let inter = h.edge_intersection(edges[i], edges[j]);
                        if j == i + 1 || (i == 0 && j == l - 1) {
                            let link = if j == i + 1 { links[i] } else { links[l - 1] };
                            if inter != vec![link] {
                                return false;
                            }
                        } else if !inter.is_empty() {
                            return false;
                        }
                    }
                }
                true
            }
            Witness::SunflowerPlus { sunflower, extra, kernel } => {
                if sunflower.len() < 2 || sunflower.contains(extra) || !distinct(sunflower) {
                    return false;
                }
                let mut all = sunflower.clone();
                all.push(*extra);
                if all.iter().any(|&e| e >= h.edge_count()) {
                    return false;
                }
                // constant pairwise intersection over the sunflower part
                for i in 0..sunflower.len() {
                    for j in i + 1..sunflower.len() {
                        if h.edge_intersection(sunflower[i], sunflower[j]) != *kernel {
                            return false;
                        }
                    }
                }
                if intersect_sorted(h.edge(*extra), kernel).is_empty() {
                    return false;
                }
                // the union must not itself be a sunflower
                sunflower.iter().any(|&s| h.edge_intersection(s, *extra) != *kernel)
            }
            Witness::Embedding { pattern, vertex_map, edges } => {
                if vertex_map.len() != pattern.vertex_count() || edges.len() != pattern.edge_count() {
                    return false;
                }
                // injective on the pattern support
                let mut used = std::collections::HashSet::new();
                for (p, &hv) in vertex_map.iter().enumerate() {
                    if pattern.degree(p) == 0 {
                        continue;
                    }
                    if hv >= h.vertex_count() || !used.insert(hv) {
                        return false;
                    }
                }
                if !distinct(edges) || edges.iter().any(|&e| e >= h.edge_count()) {
                    return false;
                }
                pattern.edges().iter().zip(edges.iter()).all(|(pe, &he)| {
                    let mut image: Vec<usize> = pe.iter().map(|&p| vertex_map[p]).collect();
                    image.sort_unstable();
                    image == h.edge(he)
                })
            }
        }
    }

    /// True when this witness certifies a member of `family` inside `h`.
    pub fn certifies(&self, h: &Hypergraph, family: &ForbiddenFamily) -> bool {
        self.validate(h) && kind_accepts(family.kind(), self, h)
    }
}

fn kind_accepts(kind: &FamilyKind, w: &Witness, h: &Hypergraph) -> bool {
    match (kind, w) {
        (FamilyKind::BergeCycle(l), Witness::BergeCycle { core, .. }) => core.len() == *l,
        (FamilyKind::BergeUpTo(l), Witness::BergeCycle { core, .. }) => {
            (2..=*l).contains(&core.len())
        }
        (FamilyKind::BergeNoSunflower(l), Witness::BergeCycle { core, edges }) => {
            core.len() == *l && sunflower::edge_set_kernel(h, edges).is_none()
        }
        (FamilyKind::BergeUpToNoSunflower(l), Witness::BergeCycle { core, edges }) => {
            (2..=*l).contains(&core.len()) && sunflower::edge_set_kernel(h, edges).is_none()
        }
        (FamilyKind::LooseCycle(l), Witness::LooseCycle { edges, .. }) => edges.len() == *l,
        (FamilyKind::SunflowerPlus(l), Witness::SunflowerPlus { sunflower, .. }) => {
            (2..=*l).contains(&sunflower.len())
        }
        (FamilyKind::F5, Witness::Embedding { pattern, .. }) => {
            canon::are_isomorphic(pattern, &f5::pattern())
        }
        (FamilyKind::ExplicitPatterns(pats), Witness::Embedding { pattern, .. }) => {
            pats.iter().any(|p| canon::are_isomorphic(p, pattern))
        }
        (FamilyKind::Union(kinds), w) => kinds.iter().any(|k| kind_accepts(k, w, h)),
        _ => false,
    }
}

fn distinct(items: &[usize]) -> bool {
    let mut sorted = items.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).all(|w| w[0] != w[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_canonical_strings() {
        let f = ForbiddenFamily::parse("berge-upto-nosun:4", 3).unwrap();
        assert_eq!(f.canonical_string(), "r3|berge-upto-nosun:4");
        let u = ForbiddenFamily::parse("union(loose:3;berge:2)", 3).unwrap();
        assert_eq!(u.canonical_string(), "r3|union(berge:2;loose:3)");
        assert!(ForbiddenFamily::parse("berge:1", 3).is_err());
        assert!(ForbiddenFamily::parse("loose:2", 3).is_err());
        assert!(ForbiddenFamily::parse("f5", 4).is_err());
        assert!(ForbiddenFamily::parse("nope:3", 3).is_err());
    }

    #[test]
    fn witnesses_validate_on_positives() {
        let h = crate::hosts::complete(6, 3);
        for spec in ["berge:2", "berge:3", "berge-upto:4", "loose:3", "sunflower-plus:3", "f5"] {
            let fam = ForbiddenFamily::parse(spec, 3).unwrap();
            let w = fam.find_in(&h).unwrap_or_else(|| panic!("{} should occur in K_6^3", spec));
            assert!(w.certifies(&h, &fam), "witness for {} fails validation", spec);
        }
    }
}
