//! Two-layer multiplex networks over a shared node set.
//!
//! Each layer is an undirected simple graph stored as sorted neighbor lists
//! in compressed (offset + target) form. Node `i` in layer A and node `i` in
//! layer B are the same individual; there are no explicit inter-layer edges.

use std::collections::BTreeSet;
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::Rng as _;
use thiserror::Error;

use crate::seeding;

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("invalid graph configuration: {0}")]
    Config(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> NetworkError + '_ {
    move |source| NetworkError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// A single undirected layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Layer {
    pub fn empty(n: usize) -> Self {
        Self {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    /// Build a layer from undirected edges. Duplicates (in either
    /// orientation) are collapsed; self-loops and out-of-range endpoints are
    /// rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, NetworkError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut canonical = BTreeSet::new();
        for (i, j) in edges {
            if i == j {
                return Err(NetworkError::Config(format!("self-loop on node {i}")));
            }
            if i >= n || j >= n {
                return Err(NetworkError::Config(format!(
                    "edge ({i}, {j}) out of range for {n} nodes"
                )));
            }
            canonical.insert((i.min(j), i.max(j)));
        }
        Ok(Self::from_canonical(n, &canonical))
    }

    fn from_canonical(n: usize, edges: &BTreeSet<(usize, usize)>) -> Self {
        let mut degree = vec![0usize; n];
        for &(i, j) in edges {
            degree[i] += 1;
            degree[j] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut targets = vec![0usize; offsets[n]];
        // BTreeSet iteration is sorted by (i, j); filling both directions in
        // this order leaves every neighbor list sorted ascending.
        let mut lower: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(i, j) in edges {
            lower[j].push(i);
        }
        for v in 0..n {
            for &u in &lower[v] {
                targets[cursor[v]] = u;
                cursor[v] += 1;
            }
            for &(_, j) in edges.range((v, 0)..(v + 1, 0)) {
                targets[cursor[v]] = j;
                cursor[v] += 1;
            }
        }
        Self { offsets, targets }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        (0..self.node_count()).map(|i| self.degree(i)).collect()
    }

    pub fn mean_degree(&self) -> f64 {
        if self.node_count() == 0 {
            return 0.0;
        }
        self.targets.len() as f64 / self.node_count() as f64
    }

    /// Edges with `i < j`, in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |i| {
            self.neighbors(i)
                .iter()
                .copied()
                .filter(move |&j| j > i)
                .map(move |j| (i, j))
        })
    }

    /// Connected-component label for every node, restricted to nodes where
    /// `active` is true. Inactive nodes get `None`. Labels are assigned in
    /// order of the smallest node index of each component.
    pub fn component_labels(&self, active: &[bool]) -> Vec<Option<usize>> {
        let n = self.node_count();
        let mut label = vec![None; n];
        let mut next = 0;
        let mut stack = Vec::new();
        for start in 0..n {
            if !active[start] || label[start].is_some() {
                continue;
            }
            label[start] = Some(next);
            stack.push(start);
            while let Some(u) = stack.pop() {
                for &w in self.neighbors(u) {
                    if active[w] && label[w].is_none() {
                        label[w] = Some(next);
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        label
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Topology {
    ErdosRenyi,
    BarabasiAlbert,
    EdgeListFile(PathBuf),
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Topology::ErdosRenyi => f.write_str("erdos-renyi"),
            Topology::BarabasiAlbert => f.write_str("barabasi-albert"),
            Topology::EdgeListFile(p) => write!(f, "edge-list-file:{}", p.display()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraphSpec {
    pub topology: Topology,
    pub n: usize,
    pub mean_degree: f64,
    pub seed: u64,
}

impl GraphSpec {
    pub fn erdos_renyi(n: usize, mean_degree: f64, seed: u64) -> Self {
        Self {
            topology: Topology::ErdosRenyi,
            n,
            mean_degree,
            seed,
        }
    }

    pub fn barabasi_albert(n: usize, mean_degree: f64, seed: u64) -> Self {
        Self {
            topology: Topology::BarabasiAlbert,
            n,
            mean_degree,
            seed,
        }
    }

    /// Per-step attachment count of the preferential-attachment generator.
    pub fn attachment_count(&self) -> usize {
        ((self.mean_degree / 2.0).round() as usize).max(1)
    }
}

/// Generate (or load) one layer according to `spec`.
pub fn generate_layer(spec: &GraphSpec) -> Result<Layer, NetworkError> {
    if let Topology::EdgeListFile(path) = &spec.topology {
        let layer = load_edge_list(path)?;
        if spec.n != 0 && layer.node_count() != spec.n {
            return Err(NetworkError::Config(format!(
                "{} declares {} nodes, expected {}",
                path.display(),
                layer.node_count(),
                spec.n
            )));
        }
        return Ok(layer);
    }
    if spec.n < 2 {
        return Err(NetworkError::Config(format!(
            "node count must be at least 2, got {}",
            spec.n
        )));
    }
    if !spec.mean_degree.is_finite() || spec.mean_degree < 0.0 {
        return Err(NetworkError::Config(format!(
            "mean degree must be a non-negative number, got {}",
            spec.mean_degree
        )));
    }
    if spec.mean_degree >= (spec.n - 1) as f64 {
        return Err(NetworkError::Config(format!(
            "mean degree {} must be below n - 1 = {}",
            spec.mean_degree,
            spec.n - 1
        )));
    }
    let mut rng = seeding::rng(spec.seed);
    match spec.topology {
        Topology::ErdosRenyi => Ok(erdos_renyi(spec.n, spec.mean_degree, &mut rng)),
        Topology::BarabasiAlbert => {
            if spec.mean_degree <= 0.0 {
                return Err(NetworkError::Config(
                    "barabasi-albert requires a positive mean degree".into(),
                ));
            }
            let m = spec.attachment_count();
            if m + 1 > spec.n {
                return Err(NetworkError::Config(format!(
                    "attachment count {m} too large for {} nodes",
                    spec.n
                )));
            }
            Ok(barabasi_albert(spec.n, m, &mut rng))
        }
        Topology::EdgeListFile(_) => unreachable!(),
    }
}

/// G(n, p) with p = k / (n - 1), sampled by geometric skipping over the
/// lower triangle so the cost is O(n + |E|).
fn erdos_renyi(n: usize, mean_degree: f64, rng: &mut seeding::Rng) -> Layer {
    let p = mean_degree / (n - 1) as f64;
    if p <= 0.0 {
        return Layer::empty(n);
    }
    let log_q = (1.0 - p).ln();
    let mut edges = BTreeSet::new();
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let r: f64 = rng.gen();
        w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.insert((w as usize, v));
        }
    }
    Layer::from_canonical(n, &edges)
}

/// Preferential attachment starting from a clique on `m + 1` nodes; each
/// new node links to `m` distinct existing nodes chosen proportionally to
/// degree.
fn barabasi_albert(n: usize, m: usize, rng: &mut seeding::Rng) -> Layer {
    let mut edges = BTreeSet::new();
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * m * n);
    for i in 0..=m {
        for j in (i + 1)..=m {
            edges.insert((i, j));
            endpoints.push(i);
            endpoints.push(j);
        }
    }
    let mut chosen = Vec::with_capacity(m);
    for new in (m + 1)..n {
        chosen.clear();
        while chosen.len() < m {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            edges.insert((t, new));
            endpoints.push(t);
            endpoints.push(new);
        }
    }
    Layer::from_canonical(n, &edges)
}

/// Layers A (virtual contacts, awareness) and B (physical contacts, disease).
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplexNetwork {
    layer_a: Layer,
    layer_b: Layer,
}

impl MultiplexNetwork {
    pub fn new(layer_a: Layer, layer_b: Layer) -> Result<Self, NetworkError> {
        if layer_a.node_count() != layer_b.node_count() {
            return Err(NetworkError::Config(format!(
                "layer node counts differ: A has {}, B has {}",
                layer_a.node_count(),
                layer_b.node_count()
            )));
        }
        Ok(Self { layer_a, layer_b })
    }

    pub fn node_count(&self) -> usize {
        self.layer_a.node_count()
    }

    pub fn layer_a(&self) -> &Layer {
        &self.layer_a
    }

    pub fn layer_b(&self) -> &Layer {
        &self.layer_b
    }
}

pub fn build_multiplex(
    layer_a_spec: &GraphSpec,
    layer_b_spec: &GraphSpec,
) -> Result<MultiplexNetwork, NetworkError> {
    let generated = |s: &GraphSpec| !matches!(s.topology, Topology::EdgeListFile(_));
    if generated(layer_a_spec) && generated(layer_b_spec) && layer_a_spec.n != layer_b_spec.n {
        return Err(NetworkError::Config(format!(
            "layer specs disagree on node count: {} vs {}",
            layer_a_spec.n, layer_b_spec.n
        )));
    }
    MultiplexNetwork::new(generate_layer(layer_a_spec)?, generate_layer(layer_b_spec)?)
}

/// Parse the edge-list format: a node count line, then `i j` pairs.
/// Blank lines and lines starting with `#` are skipped everywhere.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Layer, NetworkError> {
    let mut n: Option<usize> = None;
    let mut edges = BTreeSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| NetworkError::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| NetworkError::Parse {
            line: lineno,
            message,
        };
        let Some(count) = n else {
            let count = trimmed
                .parse::<usize>()
                .map_err(|_| parse_err(format!("expected node count, found {trimmed:?}")))?;
            n = Some(count);
            continue;
        };
        let mut fields = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(parse_err(format!("expected \"i j\", found {trimmed:?}")));
        };
        let i = a
            .parse::<usize>()
            .map_err(|_| parse_err(format!("invalid node index {a:?}")))?;
        let j = b
            .parse::<usize>()
            .map_err(|_| parse_err(format!("invalid node index {b:?}")))?;
        if i >= count || j >= count {
            return Err(parse_err(format!(
                "node index {} out of range for {count} nodes",
                i.max(j)
            )));
        }
        if i == j {
            return Err(parse_err(format!("self-loop on node {i}")));
        }
        edges.insert((i.min(j), i.max(j)));
    }
    let n = n.ok_or(NetworkError::Parse {
        line: 0,
        message: "missing node count line".into(),
    })?;
    Ok(Layer::from_canonical(n, &edges))
}

pub fn load_edge_list(path: &Path) -> Result<Layer, NetworkError> {
    let file = File::open(path).map_err(io_err(path))?;
    parse_edge_list(BufReader::new(file))
}

/// Canonical form: node count, then one `i j` line per edge with `i < j`,
/// sorted.
pub fn write_edge_list<W: Write>(layer: &Layer, mut out: W) -> io::Result<()> {
    writeln!(out, "{}", layer.node_count())?;
    for (i, j) in layer.edges() {
        writeln!(out, "{i} {j}")?;
    }
    out.flush()
}

pub fn save_edge_list(layer: &Layer, path: &Path) -> Result<(), NetworkError> {
    let file = File::create(path).map_err(io_err(path))?;
    write_edge_list(layer, BufWriter::new(file)).map_err(io_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path3() -> Layer {
        parse_edge_list("3\n0 1\n1 2\n".as_bytes()).unwrap()
    }

    #[test]
    fn parses_path_graph() {
        let g = path3();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(g.degree_sequence(), vec![1, 2, 1]);
    }

    #[test]
    fn empty_graph_degrees() {
        assert_eq!(Layer::empty(4).degree_sequence(), vec![0, 0, 0, 0]);
    }

    #[test]
    fn comments_and_duplicates() {
        let g = parse_edge_list("# header\n4\n\n1 0\n0 1\n# x\n2 3\n".as_bytes()).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbors(0), &[1]);
    }

    #[test]
    fn self_loop_rejected_with_line() {
        match parse_edge_list("3\n0 1\n0 0\n".as_bytes()) {
            Err(NetworkError::Parse { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("self-loop"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn out_of_range_and_malformed() {
        assert!(matches!(
            parse_edge_list("3\n0 3\n".as_bytes()),
            Err(NetworkError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("3\n0 1 2\n".as_bytes()),
            Err(NetworkError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("3\n0 x\n".as_bytes()),
            Err(NetworkError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("three\n".as_bytes()),
            Err(NetworkError::Parse { line: 1, .. })
        ));
        assert!(parse_edge_list("".as_bytes()).is_err());
    }

    #[test]
    fn save_load_roundtrip_on_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        let g = path3();
        save_edge_list(&g, &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "3\n0 1\n1 2\n");
        assert_eq!(load_edge_list(&path).unwrap(), g);
    }

    #[test]
    fn er_edge_count_near_expectation() {
        let g = generate_layer(&GraphSpec::erdos_renyi(1000, 4.0, 7)).unwrap();
        let m = g.edge_count() as f64;
        assert!((m - 2000.0).abs() <= 100.0, "edges = {m}");
        let degrees = g.degree_sequence();
        let mean = degrees.iter().sum::<usize>() as f64 / 1000.0;
        assert!((mean - 4.0).abs() <= 0.2, "mean degree = {mean}");
    }

    #[test]
    fn er_zero_degree_is_empty() {
        let g = generate_layer(&GraphSpec::erdos_renyi(2, 0.0, 1)).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn ba_is_heavy_tailed() {
        let spec = GraphSpec::barabasi_albert(1000, 4.0, 7);
        assert_eq!(spec.attachment_count(), 2);
        let ba = generate_layer(&spec).unwrap();
        let er = generate_layer(&GraphSpec::erdos_renyi(1000, 4.0, 7)).unwrap();
        let max_ba = *ba.degree_sequence().iter().max().unwrap();
        let max_er = *er.degree_sequence().iter().max().unwrap();
        assert!(max_ba >= 3 * max_er, "BA max {max_ba}, ER max {max_er}");
        assert!((ba.mean_degree() - 4.0).abs() < 0.2);
    }

    #[test]
    fn invalid_specs() {
        assert!(generate_layer(&GraphSpec::erdos_renyi(1, 0.0, 0)).is_err());
        assert!(generate_layer(&GraphSpec::erdos_renyi(10, -1.0, 0)).is_err());
        assert!(generate_layer(&GraphSpec::erdos_renyi(10, 9.0, 0)).is_err());
        assert!(generate_layer(&GraphSpec::barabasi_albert(10, 0.0, 0)).is_err());
    }

    #[test]
    fn multiplex_layers_independent_and_deterministic() {
        let a = GraphSpec::erdos_renyi(1000, 4.0, 1);
        let b = GraphSpec::erdos_renyi(1000, 4.0, 2);
        let net = build_multiplex(&a, &b).unwrap();
        assert_eq!(net.node_count(), 1000);
        assert_ne!(net.layer_a(), net.layer_b());
        let same = build_multiplex(&a, &a).unwrap();
        assert_eq!(same.layer_a(), same.layer_b());
    }

    #[test]
    fn multiplex_rejects_size_mismatch() {
        let a = GraphSpec::erdos_renyi(1000, 4.0, 1);
        let b = GraphSpec::erdos_renyi(999, 4.0, 1);
        assert!(build_multiplex(&a, &b).is_err());
        assert!(MultiplexNetwork::new(Layer::empty(3), Layer::empty(4)).is_err());
    }

    #[test]
    fn components_respect_mask() {
        let g = parse_edge_list("5\n0 1\n1 2\n3 4\n".as_bytes()).unwrap();
        let labels = g.component_labels(&[true; 5]);
        assert_eq!(labels, vec![Some(0), Some(0), Some(0), Some(1), Some(1)]);
        let labels = g.component_labels(&[true, false, true, true, true]);
        assert_eq!(labels, vec![Some(0), None, Some(1), Some(2), Some(2)]);
    }

    fn arb_spec() -> impl Strategy<Value = GraphSpec> {
        (2usize..200, 0.0f64..6.0, any::<u64>(), any::<bool>()).prop_filter_map(
            "degree below n-1",
            |(n, k, seed, ba)| {
                if k >= (n - 1) as f64 || (ba && k <= 0.0) {
                    return None;
                }
                Some(if ba {
                    GraphSpec::barabasi_albert(n, k, seed)
                } else {
                    GraphSpec::erdos_renyi(n, k, seed)
                })
            },
        )
    }

    proptest! {
        #[test]
        fn generated_layers_are_simple_symmetric(spec in arb_spec()) {
            let g = match generate_layer(&spec) {
                Ok(g) => g,
                Err(_) => return Ok(()),
            };
            let mut degree_sum = 0;
            for i in 0..g.node_count() {
                let nb = g.neighbors(i);
                prop_assert!(nb.windows(2).all(|w| w[0] < w[1]));
                for &j in nb {
                    prop_assert_ne!(i, j);
                    prop_assert!(g.neighbors(j).binary_search(&i).is_ok());
                }
                degree_sum += nb.len();
            }
            prop_assert_eq!(degree_sum, 2 * g.edge_count());

            let mut first = Vec::new();
            write_edge_list(&g, &mut first).unwrap();
            let mut second = Vec::new();
            write_edge_list(&generate_layer(&spec).unwrap(), &mut second).unwrap();
            prop_assert_eq!(&first, &second);
            prop_assert_eq!(parse_edge_list(first.as_slice()).unwrap(), g);
        }
    }
}
