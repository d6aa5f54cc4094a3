//! Syndrome to coset-leader tables.
//!
//! Two independent builders:
//!
//! * [`build_coset_table_bruteforce`] enumerates flip patterns by increasing
//!   weight and keeps the first pattern reaching each syndrome. Within a
//!   weight, patterns are visited in lexicographic order of their edge sets,
//!   so ties resolve to the lowest edge ids.
//! * [`build_coset_table_tjoin`] maps each syndrome to the set `T` of odd
//!   vertices of its tree-edge pattern and takes a minimum `T`-join: a
//!   minimum perfect matching of `T` under hop distance, realised as the
//!   symmetric difference of the matched shortest paths.
//!
//! For a cycle code the syndromes and the even vertex subsets are in
//! bijection, so one dynamic program over vertex subsets serves the whole
//! table and the covering radius.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::gf2::{BitMatrix, BitVector};
use crate::graph::{Graph, GraphicalCode};

/// Largest code length the exhaustive builder accepts by default.
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 24;
/// Largest vertex count for enumerating every even terminal set.
pub const DEFAULT_VERTEX_LIMIT: usize = 16;
/// Largest vertex count for which a full table is materialised.
pub const MAX_TABLE_VERTICES: usize = 20;
/// Largest terminal set accepted by [`minimum_t_join`].
pub const MAX_TERMINALS: usize = 24;

const CACHE_MAGIC: &[u8; 8] = b"GCTABLE1";

/// Minimum-weight flip pattern for every syndrome of a code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetTable {
    parity_check: BitMatrix,
    leaders: Vec<BitVector>,
    rho: usize,
}

impl CosetTable {
    /// Assembles a table, checking completeness and that each leader has
    /// its syndrome. Minimality is the caller's responsibility.
    pub fn from_leaders(parity_check: BitMatrix, leaders: Vec<BitVector>) -> Result<Self> {
        let p = parity_check.rows();
        if p >= usize::BITS as usize || leaders.len() != 1usize << p {
            return Err(Error::Invariant(format!(
                "table has {} leaders, code needs 2^{p}",
                leaders.len()
            )));
        }
        for (s, leader) in leaders.iter().enumerate() {
            if parity_check.mul_vec(leader)?.to_index() != s as u64 {
                return Err(Error::Invariant(format!(
                    "leader {leader} does not have syndrome {}",
                    BitVector::from_index(s as u64, p)
                )));
            }
        }
        let rho = leaders.iter().map(BitVector::weight).max().unwrap_or(0);
        Ok(Self {
            parity_check,
            leaders,
            rho,
        })
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.parity_check
    }

    /// Leader for a syndrome vector (length `p`).
    pub fn leader(&self, syndrome: &BitVector) -> Result<&BitVector> {
        if syndrome.len() != self.p() {
            return Err(Error::Dimension {
                op: "syndrome lookup",
                expected: self.p(),
                found: syndrome.len(),
            });
        }
        Ok(&self.leaders[syndrome.to_index() as usize])
    }

    /// Leader for a syndrome given as an MSB-first integer.
    pub fn leader_at(&self, index: usize) -> &BitVector {
        &self.leaders[index]
    }

    pub fn leaders(&self) -> &[BitVector] {
        &self.leaders
    }

    /// Covering radius: the largest leader weight.
    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn n_len(&self) -> usize {
        self.parity_check.cols()
    }

    pub fn p(&self) -> usize {
        self.parity_check.rows()
    }

    pub fn syndrome_count(&self) -> usize {
        self.leaders.len()
    }

    /// Binary dump: magic, big-endian `u32` syndrome count, then each leader
    /// as `ceil(n_len / 8)` bytes with edge `e1` in bit 0 of the first byte.
    pub fn to_cache_bytes(&self) -> Vec<u8> {
        let stride = self.n_len().div_ceil(8);
        let mut out = Vec::with_capacity(12 + stride * self.leaders.len());
        out.extend_from_slice(CACHE_MAGIC);
        out.extend_from_slice(&(self.leaders.len() as u32).to_be_bytes());
        for leader in &self.leaders {
            let mut bytes = vec![0u8; stride];
            for i in leader.support() {
                bytes[i / 8] |= 1 << (i % 8);
            }
            out.extend_from_slice(&bytes);
        }
        out
    }

    /// Loads a cache dump for `code`. A dump made for a different code is
    /// rejected because its leaders fail the syndrome check.
    pub fn from_cache_bytes(bytes: &[u8], code: &GraphicalCode) -> Result<Self> {
        let n_len = code.n_len();
        let stride = n_len.div_ceil(8);
        if bytes.len() < 12 || &bytes[..8] != CACHE_MAGIC {
            return Err(Error::Parse("not a coset table cache".into()));
        }
        let count = u32::from_be_bytes(bytes[8..12].try_into().expect("4 bytes")) as usize;
        let body = &bytes[12..];
        if body.len() != count * stride {
            return Err(Error::Parse(format!(
                "cache body is {} bytes, expected {}",
                body.len(),
                count * stride
            )));
        }
        let leaders = body
            .chunks_exact(stride.max(1))
            .take(count)
            .map(|chunk| {
                BitVector::from_bits((0..n_len).map(|i| (chunk[i / 8] >> (i % 8)) & 1))
            })
            .collect();
        Self::from_leaders(code.parity_check().clone(), leaders)
    }
}

/// Cache file name keyed by the SHA-256 of the codebook text.
pub fn cache_file_name(codebook_text: &str) -> String {
    let digest = Sha256::digest(codebook_text.as_bytes());
    let hex: String = digest[..8].iter().map(|b| format!("{b:02x}")).collect();
    format!("gctable-{hex}.bin")
}

fn check_table_size(code: &GraphicalCode) -> Result<()> {
    let v = code.graph().vertex_count();
    if v > MAX_TABLE_VERTICES {
        return Err(Error::Limit {
            what: "vertex count for a full coset table",
            value: v,
            limit: MAX_TABLE_VERTICES,
            hint: "use minimum_t_join per syndrome instead",
        });
    }
    Ok(())
}

/// Exhaustive coset-leader table with the default length limit.
pub fn build_coset_table_bruteforce(code: &GraphicalCode) -> Result<CosetTable> {
    build_coset_table_bruteforce_with_limit(code, DEFAULT_EXHAUSTIVE_LIMIT)
}

pub fn build_coset_table_bruteforce_with_limit(
    code: &GraphicalCode,
    limit: usize,
) -> Result<CosetTable> {
    let n = code.n_len();
    if n > limit {
        return Err(Error::Limit {
            what: "code length for exhaustive search",
            value: n,
            limit,
            hint: "use the T-join table builder",
        });
    }
    check_table_size(code)?;
    let h = code.parity_check();
    let p = h.rows();
    let columns: Vec<usize> = (0..n).map(|j| h.column(j).to_index() as usize).collect();
    let total = 1usize << p;
    let mut leaders: Vec<Option<Vec<usize>>> = vec![None; total];
    leaders[0] = Some(Vec::new());
    let mut filled = 1;
    let mut rho = 0;

    'weights: for w in 1..=n {
        let mut idx: Vec<usize> = (0..w).collect();
        loop {
            let s = idx.iter().fold(0, |acc, &j| acc ^ columns[j]);
            if leaders[s].is_none() {
                leaders[s] = Some(idx.clone());
                filled += 1;
                rho = w;
                if filled == total {
                    break 'weights;
                }
            }
            // next combination in lexicographic order
            let Some(i) = (0..w).rev().find(|&i| idx[i] < n - w + i) else {
                break;
            };
            idx[i] += 1;
            for j in i + 1..w {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    if filled != total {
        return Err(Error::Invariant(format!(
            "only {filled} of {total} syndromes reachable; parity check is rank deficient"
        )));
    }
    let leaders: Vec<BitVector> = leaders
        .into_iter()
        .map(|l| BitVector::from_support(n, &l.expect("all filled")))
        .collect();
    let table = CosetTable::from_leaders(h.clone(), leaders)?;
    debug_assert_eq!(table.rho(), rho);
    Ok(table)
}

/// Covering radius read off a complete table.
pub fn covering_radius_bruteforce(table: &CosetTable) -> usize {
    table.rho()
}

/// An even-sized set of vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TerminalSet {
    vertices: Vec<usize>,
}

impl TerminalSet {
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        if !vertices.len().is_multiple_of(2) {
            return Err(Error::Terminals(format!(
                "odd cardinality {} for {vertices:?}",
                vertices.len()
            )));
        }
        Ok(Self { vertices })
    }

    pub fn empty() -> Self {
        Self {
            vertices: Vec::new(),
        }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Tree-edge pattern selected by `s` (bit `i` picks the `i`-th parity-check
/// row's tree edge). Its syndrome is `s` because `H` is the identity on tree
/// columns.
fn tree_pattern(code: &GraphicalCode, s: &BitVector) -> Result<BitVector> {
    if s.len() != code.p() {
        return Err(Error::Dimension {
            op: "syndrome to terminals",
            expected: code.p(),
            found: s.len(),
        });
    }
    let mut pattern = BitVector::zeros(code.n_len());
    for i in s.support() {
        pattern.set(code.tree().tree_edges()[i], true);
    }
    Ok(pattern)
}

/// Odd-degree vertices of the tree edges selected by syndrome `s`.
pub fn syndrome_to_terminals(code: &GraphicalCode, s: &BitVector) -> Result<TerminalSet> {
    let pattern = tree_pattern(code, s)?;
    TerminalSet::new(code.graph().odd_vertices(&pattern))
}

/// Minimum-cost perfect matchings for every even subset of a small point
/// set, by dynamic programming over subsets. Pairing always removes the
/// lowest point of a subset together with some partner, so `best[mask]`
/// only depends on subsets two smaller and layers can be filled in
/// parallel.
struct SubsetMatching {
    points: usize,
    dist: Vec<u32>,
    best: Vec<u32>,
}

impl SubsetMatching {
    fn solve(points: usize, dist: Vec<u32>, exec: Execution) -> Self {
        let size = 1usize << points;
        let mut best = vec![u32::MAX; size];
        best[0] = 0;
        let mut layers: Vec<Vec<usize>> = vec![Vec::new(); points + 1];
        for mask in 1..size {
            let ones = mask.count_ones() as usize;
            if ones.is_multiple_of(2) {
                layers[ones].push(mask);
            }
        }
        for layer in layers.iter().skip(2).step_by(2) {
            let values = exec.map_slice(layer, |&mask| {
                let i = mask.trailing_zeros() as usize;
                let rest = mask & !(1 << i);
                let mut min = u32::MAX;
                let mut bits = rest;
                while bits != 0 {
                    let j = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let sub = best[rest & !(1 << j)];
                    let cost = dist[i * points + j].saturating_add(sub);
                    min = min.min(cost);
                }
                min
            });
            for (&mask, v) in layer.iter().zip(values) {
                best[mask] = v;
            }
        }
        Self { points, dist, best }
    }

    fn cost(&self, mask: usize) -> u32 {
        self.best[mask]
    }

    /// Optimal pairs for `mask`; among optimal partners the lowest index wins.
    fn pairs(&self, mut mask: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        while mask != 0 {
            let i = mask.trailing_zeros() as usize;
            let rest = mask & !(1 << i);
            let target = self.best[mask];
            let mut bits = rest;
            let j = loop {
                let j = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if self.dist[i * self.points + j].saturating_add(self.best[rest & !(1 << j)])
                    == target
                {
                    break j;
                }
            };
            out.push((i, j));
            mask = rest & !(1 << j);
        }
        out
    }
}

/// BFS trees from every vertex, used for distances and path recovery.
struct AllPairs {
    dist: Vec<Vec<usize>>,
    via: Vec<Vec<Option<usize>>>,
}

impl AllPairs {
    fn new(g: &Graph, sources: &[usize]) -> Self {
        let (dist, via) = sources.iter().map(|&s| g.shortest_path_tree(s)).unzip();
        Self { dist, via }
    }

    /// Toggles the edges of the BFS shortest path from `sources[a]` to `target`.
    fn toggle_path(&self, g: &Graph, a: usize, target: usize, join: &mut BitVector) {
        let mut x = target;
        while let Some(e) = self.via[a][x] {
            join.flip(e);
            x = g.edge(e).other(x);
        }
    }
}

/// A `T`-join of minimum cardinality.
pub fn minimum_t_join(g: &Graph, terminals: &TerminalSet) -> Result<BitVector> {
    let t = terminals.vertices();
    if let Some(&bad) = t.iter().find(|&&v| v == 0 || v > g.vertex_count()) {
        return Err(Error::Terminals(format!("vertex {bad} not in graph")));
    }
    if t.len() > MAX_TERMINALS {
        return Err(Error::Limit {
            what: "terminal count",
            value: t.len(),
            limit: MAX_TERMINALS,
            hint: "exact matching enumerates subsets of the terminals",
        });
    }
    let paths = AllPairs::new(g, t);
    let k = t.len();
    let dist = (0..k * k)
        .map(|ij| paths.dist[ij / k][t[ij % k]] as u32)
        .collect();
    let matching = SubsetMatching::solve(k, dist, Execution::Sequential);
    let mut join = BitVector::zeros(g.edge_count());
    for (a, b) in matching.pairs((1usize << k) - 1) {
        paths.toggle_path(g, a, t[b], &mut join);
    }
    Ok(join)
}

/// `τ(G, T)`: the size of a minimum `T`-join.
pub fn t_join_number(g: &Graph, terminals: &TerminalSet) -> Result<usize> {
    Ok(minimum_t_join(g, terminals)?.weight())
}

fn vertex_matching(g: &Graph, exec: Execution) -> (AllPairs, SubsetMatching) {
    let n = g.vertex_count();
    let vertices: Vec<usize> = (1..=n).collect();
    let paths = AllPairs::new(g, &vertices);
    let dist = (0..n * n)
        .map(|ij| paths.dist[ij / n][ij % n + 1] as u32)
        .collect();
    (paths, SubsetMatching::solve(n, dist, exec))
}

/// Coset-leader table built from minimum `T`-joins.
pub fn build_coset_table_tjoin(code: &GraphicalCode, exec: Execution) -> Result<CosetTable> {
    check_table_size(code)?;
    let g = code.graph();
    let p = code.p();
    let tree = code.tree().tree_edges();
    let (paths, matching) = vertex_matching(g, exec);
    let leaders = exec.map_range(1usize << p, |s| {
        let mut mask = 0usize;
        for (i, &te) in tree.iter().enumerate() {
            if (s >> (p - 1 - i)) & 1 == 1 {
                let e = g.edge(te);
                mask ^= (1 << (e.u - 1)) | (1 << (e.v - 1));
            }
        }
        let mut join = BitVector::zeros(g.edge_count());
        for (a, b) in matching.pairs(mask) {
            paths.toggle_path(g, a, b + 1, &mut join);
        }
        join
    });
    CosetTable::from_leaders(code.parity_check().clone(), leaders)
}

/// `max_T τ(G, T)` over all even `T`, with the default vertex limit.
pub fn covering_radius_tjoin(g: &Graph, exec: Execution) -> Result<usize> {
    covering_radius_tjoin_with_limit(g, DEFAULT_VERTEX_LIMIT, exec)
}

pub fn covering_radius_tjoin_with_limit(
    g: &Graph,
    limit: usize,
    exec: Execution,
) -> Result<usize> {
    let n = g.vertex_count();
    if n > limit {
        return Err(Error::Limit {
            what: "vertex count for terminal-set enumeration",
            value: n,
            limit,
            hint: "raise the limit or use the exhaustive table",
        });
    }
    let (_, matching) = vertex_matching(g, exec);
    let max = (0..1usize << n)
        .filter(|m| m.count_ones() % 2 == 0)
        .map(|m| matching.cost(m))
        .max()
        .unwrap_or(0);
    Ok(max as usize)
}

/// Which builder to use for an embedding table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableBuilder {
    /// Exhaustive when the code is short enough, otherwise `T`-join.
    #[default]
    Auto,
    Bruteforce,
    TJoin,
}

pub fn build_coset_table(
    code: &GraphicalCode,
    builder: TableBuilder,
    exec: Execution,
) -> Result<CosetTable> {
    match builder {
        TableBuilder::Bruteforce => build_coset_table_bruteforce(code),
        TableBuilder::TJoin => build_coset_table_tjoin(code, exec),
        TableBuilder::Auto if code.n_len() <= DEFAULT_EXHAUSTIVE_LIMIT => {
            build_coset_table_bruteforce(code)
        }
        TableBuilder::Auto => build_coset_table_tjoin(code, exec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::Codebook;
    use crate::graph::{build_code, complete_graph, cycle_graph, wheel_graph};

    fn k5() -> GraphicalCode {
        Codebook::worked_k5().to_code().unwrap()
    }

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn flip(n: usize, edges: &[usize]) -> BitVector {
        BitVector::from_support(n, &edges.iter().map(|e| e - 1).collect::<Vec<_>>())
    }

    #[test]
    fn bruteforce_k5_rows() {
        let table = build_coset_table_bruteforce(&k5()).unwrap();
        assert_eq!(table.syndrome_count(), 16);
        assert_eq!(table.leader(&bv("0110")).unwrap(), &bv("0000010000"));
        assert!(table.leader(&bv("0000")).unwrap().is_zero());
        assert_eq!(table.leader(&bv("0101")).unwrap().weight(), 2);
        assert_eq!(covering_radius_bruteforce(&table), 2);
    }

    #[test]
    fn bruteforce_ties_go_to_lowest_edges() {
        // 0101: candidates e5+e7 and e6+e8; lexicographic order picks e5+e7
        let table = build_coset_table_bruteforce(&k5()).unwrap();
        assert_eq!(table.leader(&bv("0101")).unwrap(), &flip(10, &[5, 7]));
    }

    #[test]
    fn triangle_radius() {
        let code = build_code(cycle_graph(3).unwrap()).unwrap();
        let table = build_coset_table_bruteforce(&code).unwrap();
        assert_eq!(table.rho(), 1);
        assert_eq!(covering_radius_tjoin(code.graph(), Execution::Sequential).unwrap(), 1);
    }

    #[test]
    fn bruteforce_refuses_long_codes() {
        let code = build_code(complete_graph(8).unwrap()).unwrap();
        assert!(matches!(
            build_coset_table_bruteforce(&code),
            Err(Error::Limit { value: 28, limit: 24, .. })
        ));
    }

    #[test]
    fn terminals_from_syndromes() {
        let code = k5();
        assert!(syndrome_to_terminals(&code, &bv("0000")).unwrap().is_empty());
        // 1000 selects tree edge e1 = (1,2)
        assert_eq!(syndrome_to_terminals(&code, &bv("1000")).unwrap().vertices(), &[1, 2]);
        // 0110 selects e5 = (2,3) and e10 = (3,4): odd at 2 and 4, joined by chord e6
        let t = syndrome_to_terminals(&code, &bv("0110")).unwrap();
        assert_eq!(t.vertices(), &[2, 4]);
        assert_eq!(minimum_t_join(code.graph(), &t).unwrap(), flip(10, &[6]));
        assert!(syndrome_to_terminals(&code, &bv("011")).is_err());
    }

    #[test]
    fn t_join_small_cases() {
        let code = k5();
        let g = code.graph();
        assert!(minimum_t_join(g, &TerminalSet::empty()).unwrap().is_zero());
        let t = TerminalSet::new(vec![1, 3]).unwrap();
        assert_eq!(minimum_t_join(g, &t).unwrap(), flip(10, &[4]));
        let t = syndrome_to_terminals(&code, &bv("1111")).unwrap();
        assert_eq!(minimum_t_join(g, &t).unwrap(), flip(10, &[3]));
        assert!(TerminalSet::new(vec![1, 2, 3]).is_err());
        assert!(minimum_t_join(g, &TerminalSet::new(vec![1, 9]).unwrap()).is_err());
    }

    #[test]
    fn t_join_on_path_uses_whole_path() {
        let g = Graph::new(4, &[(1, 2), (2, 3), (3, 4)]).unwrap();
        let j = minimum_t_join(&g, &TerminalSet::new(vec![1, 4]).unwrap()).unwrap();
        assert_eq!(j, bv("111"));
        let j = minimum_t_join(&g, &TerminalSet::new(vec![1, 2, 3, 4]).unwrap()).unwrap();
        assert_eq!(j, bv("101"));
    }

    #[test]
    fn tjoin_table_k5() {
        let code = k5();
        let table = build_coset_table_tjoin(&code, Execution::default()).unwrap();
        assert_eq!(table.leader(&bv("1110")).unwrap(), &flip(10, &[2]));
        let l = table.leader(&bv("1001")).unwrap();
        assert_eq!(l.weight(), 2);
        assert_eq!(code.syndrome(l).unwrap(), bv("1001"));
        assert_eq!(table.rho(), 2);
        assert_eq!(covering_radius_tjoin(code.graph(), Execution::default()).unwrap(), 2);
    }

    #[test]
    fn builders_agree_on_weights() {
        for g in [
            complete_graph(4).unwrap(),
            complete_graph(6).unwrap(),
            wheel_graph(5).unwrap(),
            cycle_graph(6).unwrap(),
        ] {
            let code = build_code(g).unwrap();
            let a = build_coset_table_bruteforce(&code).unwrap();
            let b = build_coset_table_tjoin(&code, Execution::Sequential).unwrap();
            for s in 0..a.syndrome_count() {
                assert_eq!(a.leader_at(s).weight(), b.leader_at(s).weight(), "syndrome {s}");
            }
            assert_eq!(a.rho(), b.rho());
        }
    }

    #[test]
    fn execution_modes_match() {
        let code = build_code(complete_graph(6).unwrap()).unwrap();
        let seq = build_coset_table_tjoin(&code, Execution::Sequential).unwrap();
        let par = build_coset_table_tjoin(&code, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn vertex_limit_enforced() {
        let g = cycle_graph(17).unwrap();
        assert!(covering_radius_tjoin(&g, Execution::Sequential).is_err());
        assert_eq!(
            covering_radius_tjoin_with_limit(&g, 17, Execution::Sequential).unwrap(),
            8
        );
    }

    #[test]
    fn cache_roundtrip_and_rejection() {
        let code = k5();
        let table = build_coset_table_bruteforce(&code).unwrap();
        let bytes = table.to_cache_bytes();
        assert_eq!(&bytes[..8], b"GCTABLE1");
        assert_eq!(&bytes[8..12], &[0, 0, 0, 16]);
        assert_eq!(bytes.len(), 12 + 16 * 2);
        // syndrome 0110 -> e6 -> byte 0 bit 5
        assert_eq!(&bytes[12 + 6 * 2..12 + 7 * 2], &[0b0010_0000, 0]);
        assert_eq!(CosetTable::from_cache_bytes(&bytes, &code).unwrap(), table);

        let other = build_code(complete_graph(5).unwrap()).unwrap();
        assert!(CosetTable::from_cache_bytes(&bytes, &other).is_err());
        assert!(CosetTable::from_cache_bytes(&bytes[..20], &code).is_err());
        assert!(CosetTable::from_cache_bytes(b"GCTABLE0\0\0\0\0", &code).is_err());
    }

    #[test]
    fn cache_name_tracks_codebook() {
        let a = cache_file_name(crate::codebook::WORKED_K5);
        assert!(a.starts_with("gctable-") && a.ends_with(".bin"));
        assert_eq!(a, cache_file_name(crate::codebook::WORKED_K5));
        assert_ne!(a, cache_file_name("graphcode v1\nvertices 3\n"));
    }
}
