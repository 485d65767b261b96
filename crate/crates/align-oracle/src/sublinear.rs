//! Space-lean oracles built from per-piece boundary-to-boundary distance
//! matrices.
//!
//! For a piece `P`, the dense distance graph `DDG_P` is the bipartite graph
//! from `top(P)` to `bot(P)` whose edge weights are shortest-path distances
//! inside `P`. To make every entry finite, each edge between two `top(P)`
//! vertices gains an artificial opposite edge of weight `w` (the maximum
//! edge weight); originally reachable pairs keep their distances. Under the
//! orderings used here (`top(P)` from its top-right corner to bottom-left,
//! `bot(P)` from bottom-left to top-right) the matrix is Monge with
//! row-adjacent entries differing by at most `w`, so the second difference
//! matrix has `O(k*w)` nonzero entries and the whole matrix compresses to
//! its last row and column plus a dominance-sum index over those points.
//!
//! Queries run Dijkstra over the DDG edges of the two query cones (the
//! sibling pieces covering each endpoint's half of the lowest common
//! ancestor piece), with DP-weighted edges attaching the endpoints to their
//! pieces' boundaries. Relaxations skip pairs unreachable in the original
//! graph, which is a constant-time coordinate test, so the artificial
//! finite values never leak into answers.

use crate::decomp::{Decomposition, PieceId, Rect};
use crate::grid::{dp_from, AlignmentGraph, BuildError, CostModel, QueryError, Vertex};
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Transform maximization weights `(w_match, w_mis, w_del)`, already
/// doubled so the half below is exact, into the nonnegative edge weights
/// `(0, w_match - w_mis, w_match/2 - w_del)`. A shortest path of length `W`
/// under the result corresponds to a highest-scoring alignment of score
/// `(m+n)/2 * w_match - W` in the same doubled units.
pub fn transform_weights(
    w_match: u64,
    w_mis: u64,
    w_del: u64,
) -> Result<(u64, u64, u64), BuildError> {
    if !w_match.is_multiple_of(2) || !w_mis.is_multiple_of(2) || !w_del.is_multiple_of(2) {
        return Err(BuildError::WeightOrder);
    }
    if !(2 * w_match > 2 * w_mis && 2 * w_mis >= w_del) {
        return Err(BuildError::WeightOrder);
    }
    let del = (w_match / 2)
        .checked_sub(w_del)
        .ok_or(BuildError::NegativeTransformedWeight)?;
    Ok((0, w_match - w_mis, del))
}

/// A Monge violation found by [`verify_monge`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MongeViolation {
    pub i: usize,
    pub j: usize,
    pub lhs: i64,
    pub rhs: i64,
    /// False for a bounded-difference (row step) violation.
    pub quadrangle: bool,
}

impl fmt::Display for MongeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.quadrangle {
            "quadrangle"
        } else {
            "row difference"
        };
        write!(
            f,
            "{kind} violated at ({}, {}): {} vs {}",
            self.i, self.j, self.lhs, self.rhs
        )
    }
}

/// Dense boundary-to-boundary distance matrix of one piece, with the
/// artificial reverse edges along `top(P)` making all entries finite.
pub struct Ddg {
    pub piece: PieceId,
    pub k: usize,
    /// `m[i * k + j]` = augmented distance from the i-th vertex of `top(P)`
    /// (top-right first) to the j-th vertex of `bot(P)` (bottom-left first);
    /// 0-indexed.
    pub m: Vec<u64>,
}

impl Ddg {
    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.m[i * self.k + j]
    }
}

/// `top(P)` in the matrix ordering: top-right corner first, bottom-left
/// corner last.
fn top_order(rect: &Rect) -> Vec<Vertex> {
    let mut v: Vec<Vertex> = rect.top_seq().collect();
    v.reverse();
    v
}

/// Augmented per-source distances: walking along `top(P)` in both directions
/// (original edges one way, weight-`w` artificial edges the other) seeds a
/// plain DAG relaxation over the piece.
pub fn build_ddg(g: &AlignmentGraph, decomp: &Decomposition, piece: PieceId, w: u64) -> Ddg {
    let rect = decomp.rect(piece);
    let tops = top_order(&rect);
    let bots: Vec<Vertex> = rect.bot_seq().collect();
    let k = tops.len();
    debug_assert_eq!(k, bots.len());
    let step = g.step();
    let width = rect.width();
    let mut m = vec![0u64; k * k];
    let mut seed = vec![u64::MAX; k];
    let mut table = vec![u64::MAX; rect.area()];
    for i in 0..k {
        // Boundary walk costs from src to every top vertex. Moving toward
        // the bottom-left (increasing index) follows original edges on the
        // left column but artificial ones along the top row, and vice versa.
        seed[i] = 0;
        for ii in (i + 1)..k {
            let (a, b) = (tops[ii - 1], tops[ii]);
            let cost = if a.x == b.x { w } else { step }; // leftward is artificial
            seed[ii] = seed[ii - 1].saturating_add(cost);
        }
        for ii in (0..i).rev() {
            let (a, b) = (tops[ii + 1], tops[ii]);
            let cost = if a.x == b.x { step } else { w }; // upward is artificial
            seed[ii] = seed[ii + 1].saturating_add(cost);
        }
        // DAG relaxation over the rectangle, seeded along top(P).
        for t in table.iter_mut() {
            *t = u64::MAX;
        }
        for (ii, &tv) in tops.iter().enumerate() {
            let slot = (tv.x - rect.x1) as usize * width + (tv.y - rect.y1) as usize;
            table[slot] = table[slot].min(seed[ii]);
        }
        for dx in 0..rect.height() {
            for dy in 0..width {
                let mut best = table[dx * width + dy];
                if dy > 0 && table[dx * width + dy - 1] != u64::MAX {
                    best = best.min(table[dx * width + dy - 1] + step);
                }
                if dx > 0 && table[(dx - 1) * width + dy] != u64::MAX {
                    best = best.min(table[(dx - 1) * width + dy] + step);
                }
                if dx > 0 && dy > 0 && table[(dx - 1) * width + dy - 1] != u64::MAX {
                    let x = rect.x1 as usize + dx - 1;
                    let y = rect.y1 as usize + dy - 1;
                    if let Some(dw) = g.diag(x, y) {
                        best = best.min(table[(dx - 1) * width + dy - 1] + dw);
                    }
                }
                table[dx * width + dy] = best;
            }
        }
        for (j, &bv) in bots.iter().enumerate() {
            let d = table[(bv.x - rect.x1) as usize * width + (bv.y - rect.y1) as usize];
            debug_assert!(d != u64::MAX, "artificial edges make every entry finite");
            m[i * k + j] = d;
        }
        seed.fill(u64::MAX);
    }
    Ddg { piece, k, m }
}

/// Check the quadrangle inequality and the bounded row differences; returns
/// every violation (empty on all real DDGs).
pub fn verify_monge(m: &[u64], k: usize, w: u64) -> Vec<MongeViolation> {
    let mut out = Vec::new();
    let e = |i: usize, j: usize| m[i * k + j] as i64;
    for i in 0..k.saturating_sub(1) {
        for j in 0..k {
            if j + 1 < k {
                let lhs = e(i + 1, j) - e(i, j);
                let rhs = e(i + 1, j + 1) - e(i, j + 1);
                if lhs > rhs {
                    out.push(MongeViolation {
                        i,
                        j,
                        lhs,
                        rhs,
                        quadrangle: true,
                    });
                }
            }
            let diff = (e(i + 1, j) - e(i, j)).abs();
            if diff > w as i64 {
                out.push(MongeViolation {
                    i,
                    j,
                    lhs: diff,
                    rhs: w as i64,
                    quadrangle: false,
                });
            }
        }
    }
    out
}

/// Static dominance-sum index over weighted points: `sum(i, j)` adds the
/// weights of all points with both coordinates at least `(i, j)`. A
/// range tree: nodes over row ranges, each holding its points' columns in
/// sorted order with suffix sums.
pub struct DominanceIndex {
    /// Sorted distinct row coordinates.
    rows: Vec<u32>,
    /// Segment-tree nodes over `rows`; node `v` covers a row range and
    /// stores sorted columns plus suffix sums of weights.
    cols: Vec<Vec<(u32, i64)>>,
    size: usize,
}

impl DominanceIndex {
    pub fn build(points: &[(u32, u32, i64)]) -> DominanceIndex {
        let mut rows: Vec<u32> = points.iter().map(|p| p.0).collect();
        rows.sort_unstable();
        rows.dedup();
        let size = rows.len().next_power_of_two().max(1);
        let mut cols: Vec<Vec<(u32, i64)>> = vec![Vec::new(); 2 * size];
        for &(r, c, wkt) in points {
            let mut node = rows.partition_point(|&x| x < r) + size;
            while node >= 1 {
                cols[node].push((c, wkt));
                node /= 2;
            }
        }
        for node in cols.iter_mut() {
            node.sort_unstable_by_key(|&(c, _)| c);
            // suffix sums in place
            let mut acc = 0i64;
            for slot in node.iter_mut().rev() {
                acc += slot.1;
                slot.1 = acc;
            }
        }
        DominanceIndex { rows, cols, size }
    }

    fn node_sum(&self, node: usize, min_col: u32) -> i64 {
        let v = &self.cols[node];
        let at = v.partition_point(|&(c, _)| c < min_col);
        if at == v.len() {
            0
        } else {
            v[at].1
        }
    }

    /// Sum of weights over points with row >= `min_row` and col >= `min_col`.
    pub fn sum(&self, min_row: u32, min_col: u32) -> i64 {
        // Descend over [lo, size) in the implicit tree.
        let lo = self.rows.partition_point(|&x| x < min_row);
        let (mut l, mut r) = (lo + self.size, 2 * self.size);
        let mut total = 0;
        while l < r {
            if l & 1 == 1 {
                total += self.node_sum(l, min_col);
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                total += self.node_sum(r, min_col);
            }
            l /= 2;
            r /= 2;
        }
        total
    }

    pub fn len_points(&self) -> usize {
        if self.cols.len() > 1 {
            self.cols[1].len()
        } else {
            0
        }
    }

    /// Numbers retained by the index.
    pub fn stored_numbers(&self) -> usize {
        self.rows.len() + self.cols.iter().map(|c| 2 * c.len()).sum::<usize>()
    }
}

/// Monge-compressed DDG: last row and column of the matrix plus the sparse
/// second-difference points under a dominance-sum index.
pub struct MongeCompressedDdg {
    pub piece: PieceId,
    pub k: usize,
    last_row: Vec<u64>,
    last_col: Vec<u64>,
    nnz: usize,
    index: DominanceIndex,
}

impl MongeCompressedDdg {
    /// Compress a dense DDG, first checking the Monge inequalities; a
    /// violation aborts with the offending quadruple.
    pub fn build(ddg: &Ddg, w: u64) -> Result<MongeCompressedDdg, MongeViolation> {
        let k = ddg.k;
        if let Some(v) = verify_monge(&ddg.m, k, w).into_iter().next() {
            return Err(v);
        }
        let e = |i: usize, j: usize| ddg.m[i * k + j] as i64;
        let mut points = Vec::new();
        for i in 0..k.saturating_sub(1) {
            for j in 0..k.saturating_sub(1) {
                let p = e(i, j) + e(i + 1, j + 1) - e(i, j + 1) - e(i + 1, j);
                if p != 0 {
                    points.push((i as u32, j as u32, p));
                }
            }
        }
        let last_row: Vec<u64> = (0..k).map(|j| ddg.entry(k - 1, j)).collect();
        let last_col: Vec<u64> = (0..k).map(|i| ddg.entry(i, k - 1)).collect();
        let nnz = points.len();
        let index = DominanceIndex::build(&points);
        Ok(MongeCompressedDdg {
            piece: ddg.piece,
            k,
            last_row,
            last_col,
            nnz,
            index,
        })
    }

    /// Reconstruct any entry exactly: the dominance sum telescopes to
    /// `M[i,j] + M[k,k] - M[i,k] - M[k,j]`.
    pub fn entry(&self, i: usize, j: usize) -> u64 {
        assert!(i < self.k && j < self.k, "DDG entry out of range");
        let corner = self.last_row[self.k - 1] as i64;
        let v = self.index.sum(i as u32, j as u32) - corner
            + self.last_col[i] as i64
            + self.last_row[j] as i64;
        debug_assert!(v >= 0);
        v as u64
    }

    pub fn nonzeros(&self) -> usize {
        self.nnz
    }

    /// Numbers retained by this representation.
    pub fn stored_numbers(&self) -> usize {
        self.last_row.len() + self.last_col.len() + self.index.stored_numbers()
    }
}

enum DdgStore {
    Dense(Ddg),
    Compressed(MongeCompressedDdg),
}

impl DdgStore {
    fn k(&self) -> usize {
        match self {
            DdgStore::Dense(d) => d.k,
            DdgStore::Compressed(c) => c.k,
        }
    }

    fn entry(&self, i: usize, j: usize) -> u64 {
        match self {
            DdgStore::Dense(d) => d.entry(i, j),
            DdgStore::Compressed(c) => c.entry(i, j),
        }
    }

    fn stored_numbers(&self) -> usize {
        match self {
            DdgStore::Dense(d) => d.m.len(),
            DdgStore::Compressed(c) => c.stored_numbers(),
        }
    }
}

/// Whether DDGs are kept dense or Monge-compressed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StorageMode {
    Dense,
    Compressed,
}

/// The cone-Dijkstra oracle: DDGs for every piece of the decomposition tree
/// pruned at an r-division, plus the strings for query-time DP.
pub struct WarmupOracle {
    g: AlignmentGraph,
    decomp: Decomposition,
    mode: StorageMode,
    /// Depth of the r-division in the decomposition tree.
    r_depth: u32,
    ddgs: BTreeMap<PieceId, DdgStore>,
}

impl WarmupOracle {
    /// Build with pieces of at most `r` vertices at the pruned frontier.
    pub fn build(
        s: &[u8],
        t: &[u8],
        cost: CostModel,
        r: usize,
        mode: StorageMode,
    ) -> Result<WarmupOracle, BuildError> {
        let g = AlignmentGraph::new(s, t, cost)?;
        let decomp = Decomposition::build(g.rows(), g.cols());
        let w = g.cost().weight_bound();
        let mut r_depth = decomp.max_depth();
        for d in 0..=decomp.max_depth() {
            if decomp.rect(decomp.pieces_at_depth(d)[0]).area() <= r.max(4) {
                r_depth = d;
                break;
            }
        }
        let mut ddgs = BTreeMap::new();
        for depth in 0..=r_depth {
            for &p in decomp.pieces_at_depth(depth) {
                let dense = build_ddg(&g, &decomp, p, w);
                let store = match mode {
                    StorageMode::Dense => DdgStore::Dense(dense),
                    StorageMode::Compressed => DdgStore::Compressed(
                        MongeCompressedDdg::build(&dense, w).expect("real DDGs are Monge"),
                    ),
                };
                ddgs.insert(p, store);
            }
        }
        Ok(WarmupOracle {
            g,
            decomp,
            mode,
            r_depth,
            ddgs,
        })
    }

    pub fn graph(&self) -> &AlignmentGraph {
        &self.g
    }

    pub fn mode(&self) -> StorageMode {
        self.mode
    }

    pub fn r_depth(&self) -> u32 {
        self.r_depth
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomp
    }

    /// Numbers stored by the DDGs of the r-division level alone.
    pub fn stored_numbers_at_r_level(&self) -> usize {
        self.decomp
            .pieces_at_depth(self.r_depth)
            .iter()
            .map(|p| self.ddgs[p].stored_numbers())
            .sum()
    }

    /// Sum over all retained DDGs.
    pub fn stored_numbers_total(&self) -> usize {
        self.ddgs.values().map(|d| d.stored_numbers()).sum()
    }

    /// The r-division piece used for a vertex (first containing, by id).
    fn r_piece(&self, v: Vertex) -> PieceId {
        *self
            .decomp
            .pieces_at_depth(self.r_depth)
            .iter()
            .find(|&&p| self.decomp.rect(p).contains(v))
            .expect("r-division covers the grid")
    }

    /// Pieces covering the child `qz` of the query LCA that holds `z`'s
    /// r-piece `pz`: the piece itself plus siblings of its weak ancestors
    /// strictly below `qz`.
    fn cone(&self, pz: PieceId, qz: PieceId) -> Vec<PieceId> {
        let mut cone = vec![pz];
        let mut cur = pz;
        while cur != qz {
            cone.push(self.decomp.sibling(cur).expect("below the root"));
            cur = self.decomp.parent(cur).unwrap();
        }
        cone
    }

    /// Alignment score for `S[i..j)` vs `T[a..b)`.
    pub fn alignment_score(
        &self,
        i: usize,
        j: usize,
        a: usize,
        b: usize,
    ) -> Result<u64, QueryError> {
        if i > j || j > self.g.m() || a > b || b > self.g.n() {
            return Err(QueryError::OutOfRange { i, j, a, b });
        }
        let d = self
            .dist_query(
                Vertex::new(i as u32, a as u32),
                Vertex::new(j as u32, b as u32),
            )
            .expect("alignment endpoints are always reachable");
        Ok(self.g.cost().score_from_distance(i, j, a, b, d))
    }

    /// Exact distance between two grid vertices; `None` when unreachable.
    pub fn dist_query(&self, u: Vertex, v: Vertex) -> Option<u64> {
        if !v.dominates(u) {
            return None;
        }
        // Any shared r-piece answers by rectangle DP.
        let shared = self
            .decomp
            .pieces_at_depth(self.r_depth)
            .iter()
            .any(|&p| self.decomp.rect(p).contains(u) && self.decomp.rect(p).contains(v));
        if shared {
            let table = dp_from(&self.g, u, v);
            return Some(table[table.len() - 1]);
        }
        let pu = self.r_piece(u);
        let pv = self.r_piece(v);
        debug_assert!(pu != pv);
        // Lowest common ancestor of the two pieces.
        let (mut a, mut b) = (pu, pv);
        while self.decomp.depth(a) > self.decomp.depth(b) {
            a = self.decomp.parent(a).unwrap();
        }
        while self.decomp.depth(b) > self.decomp.depth(a) {
            b = self.decomp.parent(b).unwrap();
        }
        while a != b {
            a = self.decomp.parent(a).unwrap();
            b = self.decomp.parent(b).unwrap();
        }
        let q = a;
        let (qu, qv) = {
            let (ca, cb) = self
                .decomp
                .children(q)
                .expect("distinct pieces have a proper LCA");
            let qu = if self.is_weak_ancestor(ca, pu) {
                ca
            } else {
                cb
            };
            let qv = if self.is_weak_ancestor(ca, pv) {
                ca
            } else {
                cb
            };
            debug_assert!(qu != qv);
            (qu, qv)
        };
        let pieces: Vec<PieceId> = self
            .cone(pu, qu)
            .into_iter()
            .chain(self.cone(pv, qv))
            .collect();
        Some(self.cone_dijkstra(u, v, pu, pv, &pieces))
    }

    fn is_weak_ancestor(&self, anc: PieceId, mut p: PieceId) -> bool {
        loop {
            if p == anc {
                return true;
            }
            match self.decomp.parent(p) {
                Some(parent) => p = parent,
                None => return false,
            }
        }
    }

    /// Dijkstra over the union of the cones' DDG edges plus DP edges from
    /// `u` to its piece boundary and from `v`'s piece boundary to `v`.
    /// Relaxations skip coordinate-unreachable pairs, so artificial DDG
    /// values never contribute.
    fn cone_dijkstra(
        &self,
        u: Vertex,
        v: Vertex,
        pu: PieceId,
        pv: PieceId,
        pieces: &[PieceId],
    ) -> u64 {
        use alloc::collections::BinaryHeap;
        use core::cmp::Reverse;

        // Per piece: its boundary orderings for relaxation.
        let mut dist: BTreeMap<Vertex, u64> = BTreeMap::new();
        let mut heap: BinaryHeap<Reverse<(u64, Vertex)>> = BinaryHeap::new();

        // Seed with DP distances from u to its piece's whole boundary.
        let ru = self.decomp.rect(pu);
        let table = dp_from(&self.g, u, Vertex::new(ru.x2, ru.y2));
        let w = (ru.y2 - u.y + 1) as usize;
        for z in ru.bot_seq().chain(ru.top_seq()) {
            if z.dominates(u) {
                let d = table[((z.x - u.x) as usize) * w + (z.y - u.y) as usize];
                let e = dist.entry(z).or_insert(u64::MAX);
                if d < *e {
                    *e = d;
                    heap.push(Reverse((d, z)));
                }
            }
        }

        // One reverse DP over pv: distances from every vertex of pv to v.
        let rv = self.decomp.rect(pv);
        let rev = reverse_dp_to(&self.g, &rv, v);
        let rvw = rv.width();
        let exit = |z: Vertex| -> Option<u64> {
            if !rv.contains(z) {
                return None;
            }
            let d = rev[((z.x - rv.x1) as usize) * rvw + (z.y - rv.y1) as usize];
            (d != u64::MAX).then_some(d)
        };

        if u == v {
            return 0;
        }
        let mut best = exit(u).unwrap_or(u64::MAX);

        let tops: Vec<(Rect, Vec<Vertex>, Vec<Vertex>, PieceId)> = pieces
            .iter()
            .map(|&p| {
                let r = self.decomp.rect(p);
                (r, top_order(&r), r.bot_seq().collect(), p)
            })
            .collect();

        while let Some(Reverse((d, z))) = heap.pop() {
            if dist.get(&z).copied().unwrap_or(u64::MAX) < d {
                continue;
            }
            if let Some(e) = exit(z) {
                best = best.min(d + e);
            }
            for (r, tops_of, bots_of, p) in &tops {
                if !r.on_top(z) {
                    continue;
                }
                let Some(i) = tops_of.iter().position(|&t| t == z) else {
                    continue;
                };
                let store = &self.ddgs[p];
                debug_assert_eq!(store.k(), tops_of.len());
                for (j, &bz) in bots_of.iter().enumerate() {
                    if !bz.dominates(z) {
                        continue; // artificial entry; no real path
                    }
                    let nd = d + store.entry(i, j);
                    let e = dist.entry(bz).or_insert(u64::MAX);
                    if nd < *e {
                        *e = nd;
                        heap.push(Reverse((nd, bz)));
                    }
                }
            }
        }
        debug_assert!(
            best != u64::MAX,
            "query endpoints must connect through the cones"
        );
        best
    }

    /// Every distance from `u` at once: one Dijkstra from `u` over the
    /// r-division DDG edges settles all piece boundaries (any
    /// boundary-to-boundary travel decomposes into r-piece crossings), then
    /// per piece a forward DP from each settled boundary vertex fills the
    /// interior. Exact, and far cheaper than per-target cone queries when
    /// sweeping all targets.
    pub fn distances_from(&self, u: Vertex) -> Vec<Option<u64>> {
        use alloc::collections::BinaryHeap;
        use core::cmp::Reverse;

        let rows = self.g.rows();
        let cols = self.g.cols();
        let mut out: Vec<Option<u64>> = vec![None; rows * cols];
        let fold = |out: &mut Vec<Option<u64>>, slot: usize, d: u64| {
            let e = &mut out[slot];
            if e.is_none_or(|cur| d < cur) {
                *e = Some(d);
            }
        };

        let r_pieces = self.decomp.pieces_at_depth(self.r_depth);
        let mut dist: BTreeMap<Vertex, u64> = BTreeMap::new();
        let mut heap: BinaryHeap<Reverse<(u64, Vertex)>> = BinaryHeap::new();

        // Seed: DP from u over one containing piece; every escape crosses
        // its boundary. Also fill that piece's targets directly.
        let pu = self.r_piece(u);
        let ru = self.decomp.rect(pu);
        let table = dp_from(&self.g, u, Vertex::new(ru.x2, ru.y2));
        let w = (ru.y2 - u.y + 1) as usize;
        for x in u.x..=ru.x2 {
            for y in u.y..=ru.y2 {
                let d = table[((x - u.x) as usize) * w + (y - u.y) as usize];
                fold(&mut out, x as usize * cols + y as usize, d);
                let z = Vertex::new(x, y);
                if ru.on_bot(z) || ru.on_top(z) {
                    let e = dist.entry(z).or_insert(u64::MAX);
                    if d < *e {
                        *e = d;
                        heap.push(Reverse((d, z)));
                    }
                }
            }
        }

        let tops: Vec<(Rect, Vec<Vertex>, Vec<Vertex>, PieceId)> = r_pieces
            .iter()
            .map(|&p| {
                let r = self.decomp.rect(p);
                (r, top_order(&r), r.bot_seq().collect(), p)
            })
            .collect();
        while let Some(Reverse((d, z))) = heap.pop() {
            if dist.get(&z).copied().unwrap_or(u64::MAX) < d {
                continue;
            }
            for (r, tops_of, bots_of, p) in &tops {
                if !r.on_top(z) {
                    continue;
                }
                let Some(i) = tops_of.iter().position(|&t| t == z) else {
                    continue;
                };
                let store = &self.ddgs[p];
                for (j, &bz) in bots_of.iter().enumerate() {
                    if !bz.dominates(z) {
                        continue;
                    }
                    let nd = d + store.entry(i, j);
                    let e = dist.entry(bz).or_insert(u64::MAX);
                    if nd < *e {
                        *e = nd;
                        heap.push(Reverse((nd, bz)));
                    }
                }
            }
        }

        // Interior fill: per piece, forward DP from every settled boundary
        // vertex, folding minima into the answer array.
        for &p in r_pieces {
            let r = self.decomp.rect(p);
            for z in r.bot_seq().chain(r.top_seq()) {
                let Some(&dz) = dist.get(&z) else { continue };
                if dz == u64::MAX {
                    continue;
                }
                let table = dp_from(&self.g, z, Vertex::new(r.x2, r.y2));
                let zw = (r.y2 - z.y + 1) as usize;
                for x in z.x..=r.x2 {
                    for y in z.y..=r.y2 {
                        let d = dz + table[((x - z.x) as usize) * zw + (y - z.y) as usize];
                        fold(&mut out, x as usize * cols + y as usize, d);
                    }
                }
            }
        }

        // Mask anything not dominating u (unreachable).
        for x in 0..rows as u32 {
            for y in 0..cols as u32 {
                if !Vertex::new(x, y).dominates(u) {
                    out[x as usize * cols + y as usize] = None;
                }
            }
        }
        out
    }
}

/// Distances from every vertex of `rect` to `v` (clipped at `v`), by reverse
/// DP; `u64::MAX` marks vertices that cannot reach `v`.
fn reverse_dp_to(g: &AlignmentGraph, rect: &Rect, v: Vertex) -> Vec<u64> {
    let w = rect.width();
    let mut table = vec![u64::MAX; rect.area()];
    let step = g.step();
    if !rect.contains(v) && !(v.x >= rect.x1 && v.y >= rect.y1) {
        return table;
    }
    for x in (rect.x1..=rect.x2.min(v.x)).rev() {
        for y in (rect.y1..=rect.y2.min(v.y)).rev() {
            let slot = ((x - rect.x1) as usize) * w + (y - rect.y1) as usize;
            if x == v.x && y == v.y {
                table[slot] = 0;
                continue;
            }
            let mut best = u64::MAX;
            if y < v.y && y < rect.y2 {
                let n = table[slot + 1];
                if n != u64::MAX {
                    best = best.min(n + step);
                }
            } else if y < v.y {
                // Right neighbor outside the rect: only relevant when v is
                // outside too; this function is used with v inside.
            }
            if x < v.x && x < rect.x2 {
                let n = table[slot + w];
                if n != u64::MAX {
                    best = best.min(n + step);
                }
            }
            if x < v.x && y < v.y && x < rect.x2 && y < rect.y2 {
                let n = table[slot + w + 1];
                if n != u64::MAX {
                    if let Some(dw) = g.diag(x as usize, y as usize) {
                        best = best.min(n + dw);
                    }
                }
            }
            table[slot] = best;
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::DpOracle;
    use crate::rng::SplitMix64;

    fn random_graph(seed: u64, m: usize, n: usize, cost: CostModel) -> AlignmentGraph {
        let mut rng = SplitMix64::new(seed);
        let s = rng.bytes(m, b"abc");
        let t = rng.bytes(n, b"abc");
        AlignmentGraph::new(&s, &t, cost).unwrap()
    }

    #[test]
    fn transform_examples() {
        // LCS as weights, doubled: (2, 0, 0) -> (0, 2, 1).
        assert_eq!(transform_weights(2, 0, 0).unwrap(), (0, 2, 1));
        // Strict inequality on w_match required.
        assert!(transform_weights(2, 2, 0).is_err());
        // Negative transformed deletion weight rejected.
        assert!(transform_weights(2, 0, 4).is_err());
    }

    #[test]
    fn transform_score_identity() {
        // Shortest path under transformed weights + conversion equals the
        // brute-force maximum alignment score under the original weights.
        let mut rng = SplitMix64::new(3);
        for _ in 0..12 {
            let s = rng.bytes(5, b"ab");
            let t = rng.bytes(5, b"ab");
            let (wm, wx, wd) = (3u64, 1, 1);
            let cm = CostModel::weighted(wm, wx, wd).unwrap();
            let g = AlignmentGraph::new(&s, &t, cm).unwrap();
            let got = DpOracle::new(&g).score(0, 5, 0, 5).unwrap();
            // Brute-force maximum score over all monotone alignments.
            fn brute(s: &[u8], t: &[u8], wm: u64, wx: u64, wd: u64) -> u64 {
                fn rec(s: &[u8], t: &[u8], wm: u64, wx: u64, wd: u64) -> u64 {
                    match (s.split_first(), t.split_first()) {
                        (None, None) => 0,
                        (Some((_, rest)), None) => wd + rec(rest, t, wm, wx, wd),
                        (None, Some((_, rest))) => wd + rec(s, rest, wm, wx, wd),
                        (Some((a, rs)), Some((b, rt))) => {
                            let pair = if a == b { wm } else { wx };
                            let m1 = pair + rec(rs, rt, wm, wx, wd);
                            let m2 = wd + rec(rs, t, wm, wx, wd);
                            let m3 = wd + rec(s, rt, wm, wx, wd);
                            m1.max(m2).max(m3)
                        }
                    }
                }
                rec(s, t, wm, wx, wd)
            }
            assert_eq!(got, brute(&s, &t, wm, wx, wd));
        }
    }

    #[test]
    fn ddg_2x2_hand_values() {
        let g = AlignmentGraph::new(b"a", b"a", CostModel::Lcs).unwrap();
        let decomp = Decomposition::build(2, 2);
        let ddg = build_ddg(&g, &decomp, decomp.root(), 1);
        // k = 3; top order: (0,1), (0,0), (1,0); bot order: (1,0), (1,1), (0,1).
        assert_eq!(ddg.k, 3);
        let r = decomp.rect(decomp.root());
        let tops = top_order(&r);
        assert_eq!(
            tops,
            vec![Vertex::new(0, 1), Vertex::new(0, 0), Vertex::new(1, 0)]
        );
        // From (0,0): to (1,0) one step; to (1,1) via the matching diagonal.
        assert_eq!(ddg.entry(1, 0), 1);
        assert_eq!(ddg.entry(1, 1), 1);
        assert_eq!(ddg.entry(1, 2), 1);
        // From (0,1) to (1,0): artificial step left then down = w + 1.
        assert_eq!(ddg.entry(0, 0), 2);
        // Corner-to-itself entries.
        assert_eq!(ddg.entry(2, 0), 0);
        assert_eq!(ddg.entry(0, 2), 0);
    }

    #[test]
    fn ddg_matches_dp_for_reachable_pairs() {
        for seed in 0..6u64 {
            let cost = if seed % 2 == 0 {
                CostModel::Lcs
            } else {
                CostModel::Levenshtein
            };
            let g = random_graph(seed, 8, 8, cost);
            let decomp = Decomposition::build(g.rows(), g.cols());
            let dp = DpOracle::new(&g);
            let w = g.cost().weight_bound();
            for depth in 0..=3 {
                for &p in decomp.pieces_at_depth(depth) {
                    let r = decomp.rect(p);
                    let ddg = build_ddg(&g, &decomp, p, w);
                    let tops = top_order(&r);
                    let bots: Vec<Vertex> = r.bot_seq().collect();
                    for (i, &tv) in tops.iter().enumerate() {
                        for (j, &bv) in bots.iter().enumerate() {
                            if bv.dominates(tv) {
                                assert_eq!(
                                    Some(ddg.entry(i, j)),
                                    dp.distance(tv, bv).unwrap(),
                                    "piece {r:?} {tv}->{bv}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn monge_holds_on_real_ddgs() {
        for seed in 0..6u64 {
            let g = random_graph(seed + 50, 16, 16, CostModel::Levenshtein);
            let decomp = Decomposition::build(g.rows(), g.cols());
            let w = g.cost().weight_bound();
            for depth in 0..=4 {
                for &p in decomp.pieces_at_depth(depth) {
                    let ddg = build_ddg(&g, &decomp, p, w);
                    assert!(verify_monge(&ddg.m, ddg.k, w).is_empty());
                }
            }
        }
    }

    #[test]
    fn planted_monge_violations_are_reported() {
        // Additive matrix, then plant a quadrangle violation.
        let k = 4;
        let mut m: Vec<u64> = (0..k * k).map(|i| ((i / k) + (i % k)) as u64).collect();
        assert!(verify_monge(&m, k, 1).is_empty());
        m[k + 1] += 2; // bumping M[1][1] breaks the quadrangles beside it
        let viol = verify_monge(&m, k, 10);
        assert!(viol.iter().any(|v| v.quadrangle && (v.i, v.j) == (0, 1)));
        assert!(viol.iter().any(|v| v.quadrangle && (v.i, v.j) == (1, 0)));
        // Plant a row-difference violation beyond w.
        let mut m2: Vec<u64> = vec![0; k * k];
        for i in 0..k {
            for j in 0..k {
                m2[i * k + j] = (i as u64) * 3; // columns constant, rows step 3
            }
        }
        let viol = verify_monge(&m2, k, 2);
        assert!(viol.iter().any(|v| !v.quadrangle));
    }

    #[test]
    fn compression_reconstructs_exactly() {
        for seed in 0..4u64 {
            let g = random_graph(seed + 9, 16, 16, CostModel::Lcs);
            let decomp = Decomposition::build(g.rows(), g.cols());
            let w = g.cost().weight_bound();
            for depth in 0..=4 {
                for &p in decomp.pieces_at_depth(depth) {
                    let ddg = build_ddg(&g, &decomp, p, w);
                    let comp = MongeCompressedDdg::build(&ddg, w).unwrap();
                    assert!(comp.nonzeros() <= 2 * (ddg.k - 1) * w as usize);
                    for i in 0..ddg.k {
                        for j in 0..ddg.k {
                            assert_eq!(comp.entry(i, j), ddg.entry(i, j), "({i},{j})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn additive_matrix_compresses_to_nothing() {
        // M[i][j] = i + j has zero second differences everywhere.
        let k = 5;
        let m: Vec<u64> = (0..k * k).map(|i| ((i / k) + (i % k)) as u64).collect();
        let ddg = Ddg {
            piece: PieceId(0),
            k,
            m,
        };
        let comp = MongeCompressedDdg::build(&ddg, 1).unwrap();
        assert_eq!(comp.nonzeros(), 0);
        for i in 0..k {
            for j in 0..k {
                assert_eq!(comp.entry(i, j), (i + j) as u64);
            }
        }
    }

    #[test]
    fn dominance_index_matches_quadratic_scan() {
        let mut rng = SplitMix64::new(77);
        let points: Vec<(u32, u32, i64)> = (0..60)
            .map(|_| {
                (
                    rng.below(20) as u32,
                    rng.below(20) as u32,
                    rng.below(11) as i64 - 5,
                )
            })
            .collect();
        let idx = DominanceIndex::build(&points);
        for r in 0..22u32 {
            for c in 0..22u32 {
                let expect: i64 = points
                    .iter()
                    .filter(|p| p.0 >= r && p.1 >= c)
                    .map(|p| p.2)
                    .sum();
                assert_eq!(idx.sum(r, c), expect, "({r},{c})");
            }
        }
    }

    fn exhaustive_backend_check(seed: u64, m: usize, n: usize, r: usize, mode: StorageMode) {
        let mut rng = SplitMix64::new(seed);
        let s = rng.bytes(m, b"ab");
        let t = rng.bytes(n, b"ab");
        let o = WarmupOracle::build(&s, &t, CostModel::Lcs, r, mode).unwrap();
        let dp = DpOracle::new(o.graph());
        for i in 0..=m {
            for a in 0..=n {
                for j in i..=m {
                    for b in a..=n {
                        assert_eq!(
                            o.alignment_score(i, j, a, b).unwrap(),
                            dp.score(i, j, a, b).unwrap(),
                            "seed={seed} ({i},{j},{a},{b}) mode={mode:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn warmup_matches_dp_exhaustively() {
        exhaustive_backend_check(1, 8, 8, 8, StorageMode::Dense);
        exhaustive_backend_check(2, 8, 8, 8, StorageMode::Compressed);
        exhaustive_backend_check(3, 6, 12, 16, StorageMode::Dense);
    }

    #[test]
    fn fig1_through_cones() {
        for mode in [StorageMode::Dense, StorageMode::Compressed] {
            let o = WarmupOracle::build(b"abac", b"abcab", CostModel::Lcs, 8, mode).unwrap();
            assert_eq!(o.dist_query(Vertex::new(0, 0), Vertex::new(4, 5)), Some(6));
            assert_eq!(o.alignment_score(0, 4, 0, 5).unwrap(), 3);
        }
    }

    #[test]
    fn batched_distances_agree() {
        let mut rng = SplitMix64::new(11);
        let s = rng.bytes(12, b"abc");
        let t = rng.bytes(12, b"abc");
        let o =
            WarmupOracle::build(&s, &t, CostModel::Levenshtein, 12, StorageMode::Dense).unwrap();
        let dp = DpOracle::new(o.graph());
        let u = Vertex::new(2, 3);
        let all = o.distances_from(u);
        for x in 0..o.graph().rows() as u32 {
            for y in 0..o.graph().cols() as u32 {
                let v = Vertex::new(x, y);
                assert_eq!(all[o.graph().vid(v)], dp.distance(u, v).unwrap());
            }
        }
    }

    #[test]
    fn compressed_stores_fewer_numbers_for_larger_r() {
        let mut rng = SplitMix64::new(21);
        let s = rng.bytes(32, b"ab");
        let t = rng.bytes(32, b"ab");
        let n = 33usize * 33;
        let r1 = (n as f64).sqrt() as usize;
        let r2 = 4 * r1;
        let o1 = WarmupOracle::build(&s, &t, CostModel::Lcs, r1, StorageMode::Compressed).unwrap();
        let o2 = WarmupOracle::build(&s, &t, CostModel::Lcs, r2, StorageMode::Compressed).unwrap();
        assert!(
            o2.stored_numbers_at_r_level() < o1.stored_numbers_at_r_level(),
            "larger pieces must store fewer numbers: {} vs {}",
            o2.stored_numbers_at_r_level(),
            o1.stored_numbers_at_r_level()
        );
    }
}
