//! Directed k-uniform hypergraphs: construction, strong products, powers,
//! adjacency supports and the line-oriented text format.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

/// Vertex labels are tuples of small integers. Product vertices carry the
/// concatenation of their factor labels.
pub type Label = Vec<i64>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("arity must be at least 2, got {0}")]
    BadArity(usize),
    #[error("edge {0:?} has {1} entries, expected {2}")]
    BadEdgeLen(Vec<u32>, usize, usize),
    #[error("edge {0:?} references vertex {1} but there are only {2} vertices")]
    EdgeOutOfRange(Vec<u32>, u32, usize),
    #[error("edge {0:?} is a constant tuple; diagonals live only in the support")]
    DiagonalEdge(Vec<u32>),
    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(Label),
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("power exponent must be at least 1")]
    ZeroPower,
    #[error("support of the requested power has {0} elements, exceeding the cap of {1}")]
    ResourceCap(u128, u128),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl FormatError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        FormatError { line, message: message.into() }
    }
}

/// Default cap on the number of support elements a materialized power may have.
pub const DEFAULT_SUPPORT_CAP: u128 = 10_000_000;

/// A directed k-uniform hypergraph. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    k: usize,
    labels: Vec<Label>,
    edges: Vec<Box<[u32]>>,
}

impl Hypergraph {
    /// Build a hypergraph from vertex labels and ordered edge tuples.
    /// Edges are deduplicated and kept in sorted order; constant tuples are rejected.
    pub fn new(
        k: usize,
        labels: Vec<Label>,
        edges: impl IntoIterator<Item = Vec<u32>>,
    ) -> Result<Self, HypergraphError> {
        if k < 2 {
            return Err(HypergraphError::BadArity(k));
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(HypergraphError::DuplicateLabel(l.clone()));
            }
        }
        let n = labels.len();
        let mut set: BTreeSet<Box<[u32]>> = BTreeSet::new();
        for e in edges {
            if e.len() != k {
                return Err(HypergraphError::BadEdgeLen(e.clone(), e.len(), k));
            }
            if let Some(&bad) = e.iter().find(|&&v| v as usize >= n) {
                return Err(HypergraphError::EdgeOutOfRange(e.clone(), bad, n));
            }
            if e.iter().all(|&v| v == e[0]) {
                return Err(HypergraphError::DiagonalEdge(e));
            }
            set.insert(e.into_boxed_slice());
        }
        Ok(Hypergraph { k, labels, edges: set.into_iter().collect() })
    }

    pub fn edgeless(k: usize, labels: Vec<Label>) -> Result<Self, HypergraphError> {
        Self::new(k, labels, std::iter::empty())
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, v: u32) -> &Label {
        &self.labels[v as usize]
    }

    pub fn edges(&self) -> &[Box<[u32]>] {
        &self.edges
    }

    pub fn has_edge(&self, e: &[u32]) -> bool {
        self.edges.binary_search_by(|x| x.as_ref().cmp(e)).is_ok()
    }

    /// The support of the adjacency tensor: all edges plus the diagonal.
    pub fn adjacency_support(&self) -> SupportSet {
        let n = self.vertex_count() as u32;
        let mut elements: Vec<Box<[u32]>> = Vec::with_capacity(self.edges.len() + n as usize);
        for v in 0..n {
            elements.push(vec![v; self.k].into_boxed_slice());
        }
        elements.extend(self.edges.iter().cloned());
        elements.sort();
        SupportSet { k: self.k, ground_sizes: vec![n; self.k], elements }
    }

    /// Strong product. The vertex set is the label-lexicographic ordering of all
    /// pairs; the edge set realizes the coordinate-wise product of the supports
    /// minus the diagonal.
    pub fn strong_product(&self, other: &Hypergraph) -> Result<Hypergraph, HypergraphError> {
        if self.k != other.k {
            return Err(HypergraphError::ArityMismatch(self.k, other.k));
        }
        let k = self.k;
        let ng = self.vertex_count();
        let nh = other.vertex_count();

        // Pair (a, b) gets the concatenated label. Canonical indices follow
        // lexicographic label order.
        let mut pairs: Vec<(Label, u32, u32)> = Vec::with_capacity(ng * nh);
        for a in 0..ng as u32 {
            for b in 0..nh as u32 {
                let mut l = self.labels[a as usize].clone();
                l.extend_from_slice(&other.labels[b as usize]);
                pairs.push((l, a, b));
            }
        }
        pairs.sort();
        let mut index = vec![0u32; ng * nh];
        let mut labels = Vec::with_capacity(ng * nh);
        for (i, (l, a, b)) in pairs.into_iter().enumerate() {
            index[(a as usize) * nh + b as usize] = i as u32;
            labels.push(l);
        }

        let supp_g = self.support_rows();
        let supp_h = other.support_rows();
        let mut edges = Vec::with_capacity(supp_g.len() * supp_h.len() - ng * nh);
        for (ge, g_diag) in &supp_g {
            for (he, h_diag) in &supp_h {
                if *g_diag && *h_diag {
                    continue;
                }
                let tuple: Vec<u32> = (0..k)
                    .map(|i| index[(ge[i] as usize) * nh + he[i] as usize])
                    .collect();
                edges.push(tuple);
            }
        }
        Hypergraph::new(k, labels, edges)
    }

    fn support_rows(&self) -> Vec<(Box<[u32]>, bool)> {
        let mut rows: Vec<(Box<[u32]>, bool)> = (0..self.vertex_count() as u32)
            .map(|v| (vec![v; self.k].into_boxed_slice(), true))
            .collect();
        rows.extend(self.edges.iter().map(|e| (e.clone(), false)));
        rows
    }

    /// n-fold strong power with the default resource cap.
    pub fn power(&self, n: u32) -> Result<Hypergraph, HypergraphError> {
        self.power_capped(n, DEFAULT_SUPPORT_CAP)
    }

    pub fn power_capped(&self, n: u32, cap: u128) -> Result<Hypergraph, HypergraphError> {
        if n == 0 {
            return Err(HypergraphError::ZeroPower);
        }
        let base = (self.edge_count() + self.vertex_count()) as u128;
        let mut size: u128 = 1;
        for _ in 0..n {
            size = size
                .checked_mul(base)
                .ok_or(HypergraphError::ResourceCap(u128::MAX, cap))?;
        }
        if size > cap {
            return Err(HypergraphError::ResourceCap(size, cap));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.strong_product(self)?;
        }
        Ok(acc)
    }

    /// Canonical text serialization; `parse` of the result is the identity.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "k {} v {}", self.k, self.vertex_count());
        for (i, l) in self.labels.iter().enumerate() {
            let parts: Vec<String> = l.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "V {} {}", i, parts.join(","));
        }
        for e in &self.edges {
            let parts: Vec<String> = e.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "E {}", parts.join(" "));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Hypergraph, FormatError> {
        let mut k = None;
        let mut vcount = 0usize;
        let mut labels: Vec<Option<Label>> = Vec::new();
        let mut edges: Vec<Vec<u32>> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut tok = line.split_whitespace();
            let head = tok.next().unwrap();
            match head {
                "k" => {
                    if k.is_some() {
                        return Err(FormatError::new(lineno, "duplicate header"));
                    }
                    let kv: usize = next_num(&mut tok, lineno, "arity")?;
                    expect_tok(&mut tok, "v", lineno)?;
                    vcount = next_num(&mut tok, lineno, "vertex count")?;
                    k = Some(kv);
                    labels = vec![None; vcount];
                }
                "V" => {
                    if k.is_none() {
                        return Err(FormatError::new(lineno, "vertex line before header"));
                    }
                    let i: usize = next_num(&mut tok, lineno, "vertex index")?;
                    if i >= vcount {
                        return Err(FormatError::new(
                            lineno,
                            format!("vertex index {} out of range (v {})", i, vcount),
                        ));
                    }
                    let tup = tok
                        .next()
                        .ok_or_else(|| FormatError::new(lineno, "missing label tuple"))?;
                    let mut label = Vec::new();
                    for part in tup.split(',') {
                        label.push(part.parse::<i64>().map_err(|_| {
                            FormatError::new(lineno, format!("invalid label component `{part}`"))
                        })?);
                    }
                    if labels[i].is_some() {
                        return Err(FormatError::new(lineno, format!("duplicate vertex {i}")));
                    }
                    labels[i] = Some(label);
                }
                "E" => {
                    if k.is_none() {
                        return Err(FormatError::new(lineno, "edge line before header"));
                    }
                    let mut e = Vec::new();
                    for part in tok.by_ref() {
                        e.push(part.parse::<u32>().map_err(|_| {
                            FormatError::new(lineno, format!("invalid vertex index `{part}`"))
                        })?);
                    }
                    if e.len() != k.unwrap() {
                        return Err(FormatError::new(
                            lineno,
                            format!("edge has {} entries, expected {}", e.len(), k.unwrap()),
                        ));
                    }
                    edges.push(e);
                }
                _ => {
                    return Err(FormatError::new(lineno, format!("unknown directive `{head}`")));
                }
            }
            if let Some(extra) = tok.next() {
                return Err(FormatError::new(lineno, format!("trailing token `{extra}`")));
            }
        }
        let k = k.ok_or_else(|| FormatError::new(0, "missing `k <arity> v <count>` header"))?;
        let labels: Vec<Label> = labels
            .into_iter()
            .enumerate()
            .map(|(i, l)| l.ok_or_else(|| FormatError::new(0, format!("vertex {i} never declared"))))
            .collect::<Result<_, _>>()?;
        Hypergraph::new(k, labels, edges).map_err(|e| FormatError::new(0, e.to_string()))
    }
}

fn next_num<T: std::str::FromStr>(
    tok: &mut std::str::SplitWhitespace<'_>,
    line: usize,
    what: &str,
) -> Result<T, FormatError> {
    let s = tok
        .next()
        .ok_or_else(|| FormatError::new(line, format!("missing {what}")))?;
    s.parse::<T>()
        .map_err(|_| FormatError::new(line, format!("invalid {what} `{s}`")))
}

fn expect_tok(
    tok: &mut std::str::SplitWhitespace<'_>,
    want: &str,
    line: usize,
) -> Result<(), FormatError> {
    match tok.next() {
        Some(t) if t == want => Ok(()),
        Some(t) => Err(FormatError::new(line, format!("expected `{want}`, got `{t}`"))),
        None => Err(FormatError::new(line, format!("expected `{want}`"))),
    }
}

/// The support of an adjacency tensor: a set of k-tuples inside
/// I_1 x ... x I_k where each I_i is an index range 0..ground_sizes[i].
/// Coefficients are always 0/1 and never materialized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportSet {
    k: usize,
    ground_sizes: Vec<u32>,
    elements: Vec<Box<[u32]>>,
}

impl SupportSet {
    pub fn new(k: usize, ground_sizes: Vec<u32>, elements: impl IntoIterator<Item = Vec<u32>>) -> Self {
        assert_eq!(ground_sizes.len(), k);
        let set: BTreeSet<Box<[u32]>> = elements
            .into_iter()
            .map(|e| {
                assert_eq!(e.len(), k, "support element has wrong arity");
                for (i, &x) in e.iter().enumerate() {
                    assert!(x < ground_sizes[i], "support element out of ground range");
                }
                e.into_boxed_slice()
            })
            .collect();
        SupportSet { k, ground_sizes, elements: set.into_iter().collect() }
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn ground_sizes(&self) -> &[u32] {
        &self.ground_sizes
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Box<[u32]>] {
        &self.elements
    }

    pub fn contains(&self, e: &[u32]) -> bool {
        self.elements.binary_search_by(|x| x.as_ref().cmp(e)).is_ok()
    }

    pub fn is_subset_of(&self, other: &SupportSet) -> bool {
        self.elements.iter().all(|e| other.contains(e))
    }

    /// Coordinate-wise product, pairing indices as (a, b) -> a * |I_b| + b so
    /// that the result of `supp(g).product(supp(h))` is comparable with
    /// `supp(g x h)` when both factors use canonical label order.
    pub fn product(&self, other: &SupportSet) -> SupportSet {
        assert_eq!(self.k, other.k, "arity mismatch");
        let ground_sizes: Vec<u32> = self
            .ground_sizes
            .iter()
            .zip(&other.ground_sizes)
            .map(|(&a, &b)| a * b)
            .collect();
        let mut elements = Vec::with_capacity(self.len() * other.len());
        for x in &self.elements {
            for y in &other.elements {
                let e: Vec<u32> = (0..self.k)
                    .map(|i| x[i] * other.ground_sizes[i] + y[i])
                    .collect();
                elements.push(e.into_boxed_slice());
            }
        }
        elements.sort();
        SupportSet { k: self.k, ground_sizes, elements }
    }

    /// Index of a constant tuple's vertex, if the element is constant.
    pub fn diagonal_vertex(e: &[u32]) -> Option<u32> {
        if e.iter().all(|&v| v == e[0]) {
            Some(e[0])
        } else {
            None
        }
    }
}

/// Render a label the way the hypergraph format and reports print it:
/// one-component labels as a bare integer, longer ones as a tuple.
pub fn fmt_label(l: &[i64]) -> String {
    if l.len() == 1 {
        l[0].to_string()
    } else {
        let parts: Vec<String> = l.iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The paper's labeling of the corner hypergraph over F2:
    /// V = (0,1,2,3), E = {(0,2,1),(1,3,0),(2,0,3),(3,1,2)}.
    pub fn corner_f2() -> Hypergraph {
        Hypergraph::new(
            3,
            vec![vec![0], vec![1], vec![2], vec![3]],
            vec![vec![0, 2, 1], vec![1, 3, 0], vec![2, 0, 3], vec![3, 1, 2]],
        )
        .unwrap()
    }

    fn capset() -> Hypergraph {
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
        .unwrap()
    }

    #[test]
    fn rejects_bad_edges() {
        let labels = vec![vec![0], vec![1]];
        assert_eq!(
            Hypergraph::new(3, labels.clone(), vec![vec![0, 0, 0]]),
            Err(HypergraphError::DiagonalEdge(vec![0, 0, 0]))
        );
        assert!(matches!(
            Hypergraph::new(3, labels.clone(), vec![vec![0, 1]]),
            Err(HypergraphError::BadEdgeLen(..))
        ));
        assert!(matches!(
            Hypergraph::new(3, labels.clone(), vec![vec![0, 1, 2]]),
            Err(HypergraphError::EdgeOutOfRange(..))
        ));
        assert!(matches!(
            Hypergraph::new(3, vec![vec![0], vec![0]], vec![]),
            Err(HypergraphError::DuplicateLabel(..))
        ));
        assert!(matches!(
            Hypergraph::new(1, vec![vec![0]], vec![]),
            Err(HypergraphError::BadArity(1))
        ));
    }

    #[test]
    fn support_of_corner_f2_has_8_elements() {
        let h = corner_f2();
        let s = h.adjacency_support();
        assert_eq!(s.len(), 8);
        assert!(s.contains(&[0, 0, 0]));
        assert!(s.contains(&[0, 2, 1]));
        assert!(!s.contains(&[0, 1, 2]));
    }

    #[test]
    fn support_of_edgeless_is_diagonal() {
        let h = Hypergraph::edgeless(3, (0..5).map(|i| vec![i]).collect()).unwrap();
        let s = h.adjacency_support();
        assert_eq!(s.len(), 5);
        assert!(s.elements().iter().all(|e| SupportSet::diagonal_vertex(e).is_some()));
    }

    #[test]
    fn support_of_capset_has_9_elements() {
        assert_eq!(capset().adjacency_support().len(), 9);
    }

    #[test]
    fn capset_square_counts() {
        let c = capset();
        let p = c.strong_product(&c).unwrap();
        assert_eq!(p.vertex_count(), 9);
        assert_eq!(p.edge_count(), 72);
    }

    #[test]
    fn product_with_edgeless_uses_condition_two_only() {
        let g = corner_f2();
        let h = Hypergraph::edgeless(3, (0..3).map(|i| vec![i]).collect()).unwrap();
        let p = g.strong_product(&h).unwrap();
        assert_eq!(p.edge_count(), g.edge_count() * h.vertex_count());
    }

    #[test]
    fn arity_mismatch_rejected() {
        let g = corner_f2();
        let h = Hypergraph::new(2, vec![vec![0], vec![1]], vec![vec![0, 1]]).unwrap();
        assert_eq!(
            g.strong_product(&h).unwrap_err(),
            HypergraphError::ArityMismatch(3, 2)
        );
    }

    #[test]
    fn power_counts_and_identity() {
        let h = corner_f2();
        assert_eq!(h.power(1).unwrap(), h);
        let p2 = h.power(2).unwrap();
        assert_eq!(p2.vertex_count(), 16);
        assert_eq!(p2.edge_count(), 48);
        let p3 = h.power(3).unwrap();
        assert_eq!(p3.vertex_count(), 64);
        assert_eq!(p3.edge_count(), 448);
        let c3 = capset().power(3).unwrap();
        assert_eq!(c3.vertex_count(), 27);
        assert_eq!(c3.edge_count(), 702);
    }

    #[test]
    fn power_respects_resource_cap() {
        let h = corner_f2();
        assert!(matches!(
            h.power_capped(10, 1000),
            Err(HypergraphError::ResourceCap(..))
        ));
        assert!(matches!(h.power(0), Err(HypergraphError::ZeroPower)));
    }

    #[test]
    fn support_is_multiplicative() {
        let g = corner_f2();
        let c = capset();
        for (a, b) in [(&g, &c), (&g, &g), (&c, &c)] {
            let p = a.strong_product(b).unwrap();
            assert_eq!(
                p.adjacency_support().len(),
                a.adjacency_support().len() * b.adjacency_support().len()
            );
        }
    }

    #[test]
    fn support_of_power_equals_support_product() {
        let g = corner_f2();
        let s = g.adjacency_support();
        let mut acc = s.clone();
        for n in 2..=3u32 {
            acc = acc.product(&s);
            assert_eq!(g.power(n).unwrap().adjacency_support(), acc);
        }
    }

    #[test]
    fn product_is_associative_with_flattened_labels() {
        let g = corner_f2();
        let c = capset();
        let left = g.strong_product(&c).unwrap().strong_product(&g).unwrap();
        let right = g.strong_product(&c.strong_product(&g).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn text_roundtrip_is_bit_exact() {
        let h = corner_f2().power(2).unwrap();
        let text = h.to_text();
        let back = Hypergraph::parse(&text).unwrap();
        assert_eq!(back, h);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = Hypergraph::parse("k 3 v 2\nV 0 0\nV 1 1\nE 0 x 1\n").unwrap_err();
        assert_eq!(err.line, 4);
        let err = Hypergraph::parse("k 3 v 2\nV 5 0\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = Hypergraph::parse("").unwrap_err();
        assert!(err.message.contains("header"));
    }
}
