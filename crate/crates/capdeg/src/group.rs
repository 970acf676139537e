//! Finite abelian groups as products of cyclic factors, corner and cap-set
//! hypergraph constructions, and corner-free / progression-free subsets.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::hypergraph::{FormatError, Hypergraph, HypergraphError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("group moduli must all be at least 1")]
    BadModulus,
    #[error("group must be nontrivial for this operation")]
    TrivialGroup,
    #[error("element {0} out of range for group of order {1}")]
    ElementOutOfRange(u64, u64),
    #[error("subset element has {0} coordinates, expected {1}")]
    BadDimension(usize, usize),
    #[error("input set is not progression-free: {0}, {0}+{1} and {0}-{1} all lie in it")]
    NotProgressionFree(u64, u64),
    #[error("lifted set failed the corner-freeness check; this is a bug")]
    LiftVerificationFailed,
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

/// A finite abelian group presented as Z_{m1} x ... x Z_{mr}. Elements are
/// encoded by the mixed-radix bijection with the first modulus most
/// significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    moduli: Vec<u64>,
}

impl GroupSpec {
    pub fn new(moduli: Vec<u64>) -> Result<Self, GroupError> {
        if moduli.is_empty() || moduli.iter().any(|&m| m == 0) {
            return Err(GroupError::BadModulus);
        }
        Ok(GroupSpec { moduli })
    }

    pub fn cyclic(m: u64) -> Result<Self, GroupError> {
        Self::new(vec![m])
    }

    /// `2,2,2` parses as Z2 x Z2 x Z2.
    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let moduli: Result<Vec<u64>, _> = text.split(',').map(|p| p.trim().parse::<u64>()).collect();
        match moduli {
            Ok(m) => Self::new(m),
            Err(_) => Err(GroupError::BadModulus),
        }
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn moduli_string(&self) -> String {
        let parts: Vec<String> = self.moduli.iter().map(|m| m.to_string()).collect();
        parts.join(",")
    }

    /// Group order m = product of the moduli.
    pub fn order(&self) -> u64 {
        self.moduli.iter().product()
    }

    pub fn decode(&self, mut x: u64) -> Vec<u64> {
        let mut digits = vec![0u64; self.moduli.len()];
        for (i, &m) in self.moduli.iter().enumerate().rev() {
            digits[i] = x % m;
            x /= m;
        }
        digits
    }

    pub fn encode(&self, digits: &[u64]) -> u64 {
        let mut x = 0u64;
        for (i, &m) in self.moduli.iter().enumerate() {
            x = x * m + digits[i] % m;
        }
        x
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let da = self.decode(a);
        let db = self.decode(b);
        let sum: Vec<u64> = da
            .iter()
            .zip(&db)
            .zip(&self.moduli)
            .map(|((&x, &y), &m)| (x + y) % m)
            .collect();
        self.encode(&sum)
    }

    pub fn neg(&self, a: u64) -> u64 {
        let da = self.decode(a);
        let neg: Vec<u64> = da
            .iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| (m - x) % m)
            .collect();
        self.encode(&neg)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    /// The n-fold direct power of the group.
    pub fn pow(&self, n: u32) -> GroupSpec {
        let mut moduli = Vec::with_capacity(self.moduli.len() * n as usize);
        for _ in 0..n {
            moduli.extend_from_slice(&self.moduli);
        }
        GroupSpec { moduli }
    }
}

/// Build the corner hypergraph of a group: vertices are pairs (g1, g2)
/// labeled m * phi(g1) + phi(g2), and each lambda != 0 contributes the edge
/// ((g1,g2), (g1+lambda,g2), (g1,g2+lambda)).
pub fn corner_hypergraph(g: &GroupSpec) -> Hypergraph {
    let m = g.order();
    let vertex = |g1: u64, g2: u64| (m * g1 + g2) as u32;
    let labels = (0..m * m).map(|x| vec![x as i64]).collect();
    let mut edges = Vec::with_capacity((m * m * (m.saturating_sub(1))) as usize);
    for g1 in 0..m {
        for g2 in 0..m {
            for lambda in 1..m {
                edges.push(vec![
                    vertex(g1, g2),
                    vertex(g.add(g1, lambda), g2),
                    vertex(g1, g.add(g2, lambda)),
                ]);
            }
        }
    }
    Hypergraph::new(3, labels, edges).expect("corner construction is always valid")
}

/// The (k+1)-uniform hypergraph of k-dimensional corners over a group:
/// vertices are k-tuples over G and each lambda != 0 contributes
/// (x, x + lambda e_1, ..., x + lambda e_k).
pub fn kcorner_hypergraph(g: &GroupSpec, k: u32) -> Result<Hypergraph, GroupError> {
    if k < 2 {
        return Err(GroupError::BadDimension(k as usize, 2));
    }
    let m = g.order();
    let count = m.pow(k);
    let labels = (0..count).map(|x| vec![x as i64]).collect();
    let decode = |mut x: u64| -> Vec<u64> {
        let mut t = vec![0u64; k as usize];
        for i in (0..k as usize).rev() {
            t[i] = x % m;
            x /= m;
        }
        t
    };
    let encode = |t: &[u64]| -> u32 {
        let mut x = 0u64;
        for &d in t {
            x = x * m + d;
        }
        x as u32
    };
    let mut edges = Vec::new();
    for x in 0..count {
        let base = decode(x);
        for lambda in 1..m {
            let mut e = Vec::with_capacity(k as usize + 1);
            e.push(x as u32);
            for i in 0..k as usize {
                let mut t = base.clone();
                t[i] = g.add(t[i], lambda);
                e.push(encode(&t));
            }
            edges.push(e);
        }
    }
    Ok(Hypergraph::new(k as usize + 1, labels, edges)?)
}

/// The cap set hypergraph: three vertices and the single undirected edge
/// {0,1,2}, realized as all six permutations.
pub fn capset_hypergraph() -> Hypergraph {
    Hypergraph::new(
        3,
        vec![vec![0], vec![1], vec![2]],
        vec![
            vec![0, 1, 2],
            vec![0, 2, 1],
            vec![1, 0, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![2, 1, 0],
        ],
    )
    .expect("cap set construction is always valid")
}

/// A subset of G^d with elements stored as d-tuples of encoded group elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSubset {
    group: GroupSpec,
    dim: usize,
    elements: Vec<Box<[u64]>>,
}

impl GroundSubset {
    pub fn new(
        group: GroupSpec,
        dim: usize,
        elements: impl IntoIterator<Item = Vec<u64>>,
    ) -> Result<Self, GroupError> {
        let m = group.order();
        let set: BTreeSet<Box<[u64]>> = elements
            .into_iter()
            .map(|e| {
                if e.len() != dim {
                    return Err(GroupError::BadDimension(e.len(), dim));
                }
                if let Some(&bad) = e.iter().find(|&&x| x >= m) {
                    return Err(GroupError::ElementOutOfRange(bad, m));
                }
                Ok(e.into_boxed_slice())
            })
            .collect::<Result<_, _>>()?;
        Ok(GroundSubset { group, dim, elements: set.into_iter().collect() })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Box<[u64]>] {
        &self.elements
    }

    pub fn contains(&self, e: &[u64]) -> bool {
        self.elements.binary_search_by(|x| x.as_ref().cmp(e)).is_ok()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "group {} dim {}", self.group.moduli_string(), self.dim);
        for e in &self.elements {
            let parts: Vec<String> = e.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "S {}", parts.join(","));
        }
        out
    }

    pub fn parse(text: &str) -> Result<GroundSubset, FormatError> {
        let mut header: Option<(GroupSpec, usize)> = None;
        let mut elements: Vec<Vec<u64>> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut tok = line.split_whitespace();
            match tok.next().unwrap() {
                "group" => {
                    let moduli = tok
                        .next()
                        .ok_or_else(|| FormatError { line: lineno, message: "missing moduli".into() })?;
                    let group = GroupSpec::parse(moduli).map_err(|e| FormatError {
                        line: lineno,
                        message: e.to_string(),
                    })?;
                    match tok.next() {
                        Some("dim") => {}
                        other => {
                            return Err(FormatError {
                                line: lineno,
                                message: format!("expected `dim`, got {:?}", other),
                            })
                        }
                    }
                    let d: usize = tok
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| FormatError { line: lineno, message: "invalid dimension".into() })?;
                    header = Some((group, d));
                }
                "S" => {
                    if header.is_none() {
                        return Err(FormatError {
                            line: lineno,
                            message: "element line before header".into(),
                        });
                    }
                    let tup = tok
                        .next()
                        .ok_or_else(|| FormatError { line: lineno, message: "missing tuple".into() })?;
                    let e: Result<Vec<u64>, _> = tup.split(',').map(|p| p.parse::<u64>()).collect();
                    elements.push(e.map_err(|_| FormatError {
                        line: lineno,
                        message: format!("invalid tuple `{tup}`"),
                    })?);
                }
                other => {
                    return Err(FormatError {
                        line: lineno,
                        message: format!("unknown directive `{other}`"),
                    })
                }
            }
        }
        let (group, dim) =
            header.ok_or_else(|| FormatError { line: 0, message: "missing `group ... dim ...` header".into() })?;
        GroundSubset::new(group, dim, elements).map_err(|e| FormatError { line: 0, message: e.to_string() })
    }
}

/// True iff no x, y, lambda with lambda != 0 have (x,y), (x+lambda,y) and
/// (x,y+lambda) all inside the set.
pub fn is_cornerfree(t: &GroundSubset) -> Result<bool, GroupError> {
    if t.dim() != 2 {
        return Err(GroupError::BadDimension(t.dim(), 2));
    }
    let g = t.group().clone();
    let m = g.order();
    for e in t.elements() {
        let (x, y) = (e[0], e[1]);
        for lambda in 1..m {
            if t.contains(&[g.add(x, lambda), y]) && t.contains(&[x, g.add(y, lambda)]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True iff the set contains no symmetric triple a-lambda, a, a+lambda with
/// lambda != 0. For groups of odd order this is exactly freeness from
/// three-term arithmetic progressions; in the presence of 2-torsion it also
/// excludes the degenerate progressions with a+lambda = a-lambda, which is
/// what the corner-free lift needs.
pub fn is_progression_free(s: &GroundSubset) -> Result<Option<(u64, u64)>, GroupError> {
    if s.dim() != 1 {
        return Err(GroupError::BadDimension(s.dim(), 1));
    }
    let g = s.group().clone();
    let m = g.order();
    for e in s.elements() {
        let a = e[0];
        for lambda in 1..m {
            if s.contains(&[g.add(a, lambda)]) && s.contains(&[g.sub(a, lambda)]) {
                return Ok(Some((a, lambda)));
            }
        }
    }
    Ok(None)
}

/// Lift a progression-free set S in G to the corner-free set
/// T = {(x, y) : x - y in S} of size |G| * |S|.
pub fn lift_apfree_to_cornerfree(s: &GroundSubset) -> Result<GroundSubset, GroupError> {
    if let Some((a, lambda)) = is_progression_free(s)? {
        return Err(GroupError::NotProgressionFree(a, lambda));
    }
    let g = s.group().clone();
    let m = g.order();
    let mut elements = Vec::with_capacity((m as usize) * s.len());
    for e in s.elements() {
        let d = e[0];
        for y in 0..m {
            elements.push(vec![g.add(d, y), y]);
        }
    }
    let t = GroundSubset::new(g, 2, elements)?;
    if !is_cornerfree(&t)? {
        return Err(GroupError::LiftVerificationFailed);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_radix_roundtrip_and_addition() {
        let g = GroupSpec::parse("3,2").unwrap();
        assert_eq!(g.order(), 6);
        for x in 0..6 {
            assert_eq!(g.encode(&g.decode(x)), x);
        }
        // (1,1) + (2,1) = (0,0)
        assert_eq!(g.add(g.encode(&[1, 1]), g.encode(&[2, 1])), 0);
        assert_eq!(g.neg(g.encode(&[1, 0])), g.encode(&[2, 0]));
    }

    #[test]
    fn corner_f2_matches_paper_edge_list() {
        let h = corner_hypergraph(&GroupSpec::cyclic(2).unwrap());
        assert_eq!(h.vertex_count(), 4);
        let expected: Vec<Vec<u32>> =
            vec![vec![0, 2, 1], vec![1, 3, 0], vec![2, 0, 3], vec![3, 1, 2]];
        let got: Vec<Vec<u32>> = h.edges().iter().map(|e| e.to_vec()).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn corner_f3_matches_paper_support() {
        let h = corner_hypergraph(&GroupSpec::cyclic(3).unwrap());
        assert_eq!(h.vertex_count(), 9);
        assert_eq!(h.edge_count(), 18);
        // The 18 edge rows of the support listed in the paper's F3 proof.
        let expected: Vec<[u32; 3]> = vec![
            [0, 3, 1], [0, 6, 2], [1, 4, 2], [1, 7, 0], [2, 5, 0], [2, 8, 1],
            [3, 6, 4], [3, 0, 5], [4, 7, 5], [4, 1, 3], [5, 8, 3], [5, 2, 4],
            [6, 0, 7], [6, 3, 8], [7, 1, 8], [7, 4, 6], [8, 2, 6], [8, 5, 7],
        ];
        for e in expected {
            assert!(h.has_edge(&e), "missing edge {:?}", e);
        }
    }

    #[test]
    fn corner_edge_count_formula() {
        for spec in ["2", "3", "4", "5", "2,2", "3,3", "2,2,2", "9"] {
            let g = GroupSpec::parse(spec).unwrap();
            let m = g.order();
            let h = corner_hypergraph(&g);
            assert_eq!(h.vertex_count() as u64, m * m);
            assert_eq!(h.edge_count() as u64, m * m * (m - 1), "group {spec}");
        }
    }

    #[test]
    fn corner_trivial_group() {
        let h = corner_hypergraph(&GroupSpec::cyclic(1).unwrap());
        assert_eq!(h.vertex_count(), 1);
        assert_eq!(h.edge_count(), 0);
    }

    #[test]
    fn kcorner_counts_and_k2_coincidence() {
        let f2 = GroupSpec::cyclic(2).unwrap();
        assert_eq!(kcorner_hypergraph(&f2, 2).unwrap(), corner_hypergraph(&f2));
        let h = kcorner_hypergraph(&f2, 3).unwrap();
        assert_eq!(h.arity(), 4);
        assert_eq!(h.vertex_count(), 8);
        assert_eq!(h.edge_count(), 8);
        let f3 = GroupSpec::cyclic(3).unwrap();
        let h = kcorner_hypergraph(&f3, 3).unwrap();
        assert_eq!(h.vertex_count(), 27);
        assert_eq!(h.edge_count(), 54);
    }

    #[test]
    fn capset_support_size() {
        assert_eq!(capset_hypergraph().adjacency_support().len(), 9);
    }

    #[test]
    fn row_sets_are_cornerfree() {
        // {(g, g+lambda) : lambda in G} for fixed g is corner-free.
        let g = GroupSpec::parse("3,3").unwrap();
        let m = g.order();
        let fixed = 4u64;
        let t = GroundSubset::new(g.clone(), 2, (0..m).map(|l| vec![fixed, g.add(fixed, l)]))
            .unwrap();
        assert!(is_cornerfree(&t).unwrap());
    }

    #[test]
    fn full_square_is_not_cornerfree() {
        let g = GroupSpec::cyclic(2).unwrap();
        let t = GroundSubset::new(
            g,
            2,
            (0..2).flat_map(|x| (0..2).map(move |y| vec![x, y])),
        )
        .unwrap();
        assert!(!is_cornerfree(&t).unwrap());
    }

    #[test]
    fn lift_of_01_in_f3() {
        let g = GroupSpec::cyclic(3).unwrap();
        let s = GroundSubset::new(g, 1, vec![vec![0], vec![1]]).unwrap();
        let t = lift_apfree_to_cornerfree(&s).unwrap();
        assert_eq!(t.len(), 6);
        assert!(is_cornerfree(&t).unwrap());
    }

    #[test]
    fn lift_of_empty_set_is_empty() {
        let g = GroupSpec::cyclic(3).unwrap();
        let s = GroundSubset::new(g, 1, vec![]).unwrap();
        assert!(lift_apfree_to_cornerfree(&s).unwrap().is_empty());
    }

    #[test]
    fn lift_rejects_progressions() {
        let g = GroupSpec::cyclic(5).unwrap();
        let s = GroundSubset::new(g, 1, vec![vec![0], vec![1], vec![2]]).unwrap();
        assert!(matches!(
            lift_apfree_to_cornerfree(&s),
            Err(GroupError::NotProgressionFree(..))
        ));
        // 2-torsion: {0, 1} in F2 fails because 0+1 = 0-1.
        let g = GroupSpec::cyclic(2).unwrap();
        let s = GroundSubset::new(g, 1, vec![vec![0], vec![1]]).unwrap();
        assert!(matches!(
            lift_apfree_to_cornerfree(&s),
            Err(GroupError::NotProgressionFree(..))
        ));
    }

    #[test]
    fn subset_text_roundtrip() {
        let g = GroupSpec::parse("3,3").unwrap();
        let t = GroundSubset::new(g, 2, vec![vec![0, 1], vec![8, 3]]).unwrap();
        let text = t.to_text();
        let back = GroundSubset::parse(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_text(), text);
        let err = GroundSubset::parse("group 3 dim 1\nS x\n").unwrap_err();
        assert_eq!(err.line, 2);
    }
}
