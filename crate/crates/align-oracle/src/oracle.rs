//! The full oracle: preprocessing driver and query engine.
//!
//! Preprocessing builds, per division-tree piece, a reverse shortest-path
//! forest over the piece and a forward forest over its parent minus the
//! piece's interior (sources `bot(P)` for both), then constructs Voronoi
//! diagrams level by level downward: for every piece `P` below the top two
//! levels and every `u` in `bot(P)`, the diagram of `out(parent(P))` with
//! additive weights `dist(u, bot(parent(P)))`, and one diagram per vertex at
//! the bottom. Diagram construction issues distance queries against the
//! partially built oracle itself, which is sound because a query from a
//! source on `bot(P)` only consults diagrams of strictly higher levels.
//!
//! A query `dist(u, v)` walks candidate splitter sets up the division tree:
//! starting from `{u}`, each candidate `w` locates `v` in the stored diagram
//! `VD(w, R_i)` by binary search over the persistent site sequence of `v`'s
//! row or column, contributing at most two next-level candidates. The final
//! set lies on `bot(R_{h-1})` where `h` is the first level with `v` inside
//! the ancestor rectangle but off its bot; the best split vertex there gives
//! the distance through the two stored forests.

use crate::decomp::{Decomposition, Division, PieceId};
use crate::grid::{dp_from, dp_trace, AlignmentGraph, BuildError, CostModel, QueryError, Vertex};
use crate::mssp::{Axis, Direction, Region, Side, SpForest};
use crate::voronoi::{build_vd, probe_stored_path, DistOracle, PathRepr, Route, VoronoiRepr};
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

/// Construction parameters: consecutive division levels differ by roughly
/// `ratio`, and level-1 pieces have at most `leaf_target` vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleParams {
    pub ratio: usize,
    pub leaf_target: usize,
}

impl Default for OracleParams {
    fn default() -> Self {
        OracleParams {
            ratio: 16,
            leaf_target: 16,
        }
    }
}

/// Per-query instrumentation. Also carries the construction-time watermark
/// asserting that diagram building only consults higher-level diagrams.
#[derive(Clone, Debug, Default)]
pub struct QueryStats {
    /// Forest lookups: side-of-path probes plus distance reads.
    pub mssp_probes: u64,
    pub gamma_searches: u64,
    /// Queries answered by direct DP (same piece / same row / same column).
    pub direct_answers: u64,
    pub queries: u64,
    pub max_candidate_set: usize,
    /// When set, consulted diagrams must have parent level above this.
    pub min_vd_parent_level: Option<u32>,
}

/// Aggregate construction statistics.
#[derive(Clone, Debug, Default)]
pub struct BuildStats {
    pub t: u32,
    /// Per level: (level, piece count, vertices per piece).
    pub levels: Vec<(u32, usize, usize)>,
    pub mssp_entries: usize,
    pub vd_count: usize,
    pub vd_records: usize,
    pub gamma_nodes: usize,
    pub zoom_candidate_total: usize,
    pub build_dist_queries: u64,
}

/// One step of an edit script.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EditOp {
    Match,
    Subst,
    Del,
    Ins,
}

impl EditOp {
    pub fn letter(self) -> char {
        match self {
            EditOp::Match => 'M',
            EditOp::Subst => 'X',
            EditOp::Del => 'D',
            EditOp::Ins => 'I',
        }
    }
}

/// Run-length encoded edit script plus the matched characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlignmentTrace {
    pub ops: Vec<(u32, EditOp)>,
    /// Characters of the matched diagonal steps, in order: a common
    /// subsequence of the two substrings.
    pub matches: Vec<u8>,
    pub distance: u64,
}

impl AlignmentTrace {
    /// CIGAR-like rendering, e.g. `1M1D2M`.
    pub fn cigar(&self) -> String {
        let mut out = String::new();
        for &(n, op) in &self.ops {
            let _ = write!(out, "{}{}", n, op.letter());
        }
        out
    }
}

/// The fully built oracle.
pub struct OracleIndex {
    g: AlignmentGraph,
    decomp: Decomposition,
    div: Division,
    params: OracleParams,
    /// Reverse forest over each level-1..t-1 piece, sources its bot.
    rev_forests: BTreeMap<PieceId, SpForest>,
    /// Forward forest over parent(P) minus interior(P), keyed by P.
    fwd_forests: BTreeMap<PieceId, SpForest>,
    /// Diagrams for piece sources: per piece P (levels 1..=t-2), per bot
    /// index, the diagram of out(parent(P)).
    piece_vds: BTreeMap<PieceId, Vec<VoronoiRepr>>,
    /// Diagrams for vertex singletons: per vertex id, the diagram of
    /// out(attached level-1 piece).
    vertex_vds: Vec<VoronoiRepr>,
}

struct PartialOracle<'a> {
    index: &'a OracleIndex,
    parent_level: u32,
    queries: &'a mut u64,
}

impl DistOracle for PartialOracle<'_> {
    fn dist_route(&mut self, u: Vertex, v: Vertex) -> Option<(u64, Route)> {
        *self.queries += 1;
        let mut stats = QueryStats {
            min_vd_parent_level: Some(self.parent_level),
            ..QueryStats::default()
        };
        self.index.dist_query_with(u, v, &mut stats)
    }
}

impl OracleIndex {
    pub fn build(
        s: &[u8],
        t: &[u8],
        cost: CostModel,
        params: OracleParams,
    ) -> Result<(OracleIndex, BuildStats), BuildError> {
        let g = AlignmentGraph::new(s, t, cost)?;
        let decomp = Decomposition::build(g.rows(), g.cols());
        let div = Division::build(&decomp, params.ratio, params.leaf_target);
        let tl = div.t();

        let mut stats = BuildStats {
            t: tl,
            ..BuildStats::default()
        };
        for level in 1..=tl {
            let pieces = div.pieces_at_level(level);
            stats
                .levels
                .push((level, pieces.len(), decomp.rect(pieces[0]).area()));
        }

        let mut rev_forests = BTreeMap::new();
        let mut fwd_forests = BTreeMap::new();
        for level in 1..tl {
            for &p in div.pieces_at_level(level) {
                let rect = decomp.rect(p);
                let sources: Vec<Vertex> = rect.bot_seq().collect();
                let rev =
                    SpForest::build(&g, Region::piece(rect), sources.clone(), Direction::Reverse);
                let parent = div.div_parent(p).expect("non-root levels have parents");
                let fwd = SpForest::build(
                    &g,
                    Region::ring(decomp.rect(parent), rect),
                    sources,
                    Direction::Forward,
                );
                stats.mssp_entries += rev.entries() + fwd.entries();
                rev_forests.insert(p, rev);
                fwd_forests.insert(p, fwd);
            }
        }

        let mut index = OracleIndex {
            g,
            decomp,
            div,
            params,
            rev_forests,
            fwd_forests,
            piece_vds: BTreeMap::new(),
            vertex_vds: Vec::new(),
        };

        // Voronoi diagrams in decreasing parent level. Parent level t (the
        // whole grid) is skipped: queries never consult it.
        let mut build_queries = 0u64;
        for parent_level in (2..tl).rev() {
            let child_level = parent_level - 1;
            let pieces: Vec<PieceId> = index.div.pieces_at_level(child_level).to_vec();
            let mut built: Vec<(PieceId, Vec<VoronoiRepr>)> = Vec::new();
            for p in pieces {
                let q = index.div.div_parent(p).unwrap();
                let bot_q: Vec<Vertex> = index.decomp.rect(q).bot_seq().collect();
                let n_src = index.decomp.rect(p).bot_len();
                let mut per_source = Vec::with_capacity(n_src);
                for si in 0..n_src {
                    let fwd = &index.fwd_forests[&p];
                    let omega: Vec<Option<u64>> =
                        bot_q.iter().map(|&sv| fwd.dist_by_index(si, sv)).collect();
                    let mut oracle = PartialOracle {
                        index: &index,
                        parent_level,
                        queries: &mut build_queries,
                    };
                    let (vd, cand_total) = build_vd(&index.g, &index.decomp, q, omega, &mut oracle);
                    stats.zoom_candidate_total += cand_total;
                    per_source.push(vd);
                }
                built.push((p, per_source));
            }
            for (p, vds) in built {
                index.piece_vds.insert(p, vds);
            }
        }

        // Vertex singletons, attached below level 1.
        if tl >= 2 {
            let rows = index.g.rows() as u32;
            let cols = index.g.cols() as u32;
            let mut vds = Vec::with_capacity((rows * cols) as usize);
            for x in 0..rows {
                for y in 0..cols {
                    let v = Vertex::new(x, y);
                    let q = index.div.attach(v);
                    let q_rect = index.decomp.rect(q);
                    // Additive weights by DP inside the attached piece:
                    // shortest paths to its bot never need to leave it.
                    let corner = Vertex::new(q_rect.x2, q_rect.y2);
                    let table = dp_from(&index.g, v, corner);
                    let w = (corner.y - v.y + 1) as usize;
                    let omega: Vec<Option<u64>> = q_rect
                        .bot_seq()
                        .map(|s| {
                            s.dominates(v)
                                .then(|| table[((s.x - v.x) as usize) * w + (s.y - v.y) as usize])
                        })
                        .collect();
                    let mut oracle = PartialOracle {
                        index: &index,
                        parent_level: 1,
                        queries: &mut build_queries,
                    };
                    let (vd, cand_total) = build_vd(&index.g, &index.decomp, q, omega, &mut oracle);
                    stats.zoom_candidate_total += cand_total;
                    vds.push(vd);
                }
            }
            index.vertex_vds = vds;
        }

        stats.build_dist_queries = build_queries;
        for vd in index.all_vds() {
            stats.vd_count += 1;
            stats.vd_records += vd.records.iter().flatten().count();
            stats.gamma_nodes += vd.gamma_rows.nodes() + vd.gamma_cols.nodes();
        }
        Ok((index, stats))
    }

    pub fn graph(&self) -> &AlignmentGraph {
        &self.g
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomp
    }

    pub fn division(&self) -> &Division {
        &self.div
    }

    pub fn params(&self) -> OracleParams {
        self.params
    }

    pub fn t(&self) -> u32 {
        self.div.t()
    }

    /// All stored Voronoi diagrams (piece sources first, then singletons).
    pub fn all_vds(&self) -> impl Iterator<Item = &VoronoiRepr> {
        self.piece_vds
            .values()
            .flatten()
            .chain(self.vertex_vds.iter())
    }

    /// Exact distance between two grid vertices; `None` when unreachable.
    pub fn dist_query(&self, u: Vertex, v: Vertex) -> Option<u64> {
        let mut stats = QueryStats::default();
        self.dist_query_with(u, v, &mut stats).map(|(d, _)| d)
    }

    /// Distance plus the route taken; the workhorse behind everything else.
    pub fn dist_query_with(
        &self,
        u: Vertex,
        v: Vertex,
        stats: &mut QueryStats,
    ) -> Option<(u64, Route)> {
        debug_assert!(self.g.contains(u) && self.g.contains(v));
        stats.queries += 1;
        if !v.dominates(u) {
            return None;
        }
        // Shared row or column: the unique monotone path is the straight
        // run, answered directly.
        if u.x == v.x || u.y == v.y {
            stats.direct_answers += 1;
            let d = ((v.x - u.x) as u64 + (v.y - u.y) as u64) * self.g.step();
            return Some((d, Route::Direct));
        }
        // Shared level-1 piece: DP over the query rectangle.
        let r1 = self.decomp.rect(self.div.attach(u));
        if r1.contains(v) {
            stats.direct_answers += 1;
            let table = dp_from(&self.g, u, v);
            return Some((table[table.len() - 1], Route::Direct));
        }
        let lev = self.div.lev(&self.decomp, u);
        let h = self.div.anc(&self.decomp, u, v);
        debug_assert!(h > lev, "reachable targets sit above the source's lev");
        let w = if h == lev + 1 {
            u
        } else {
            self.get_last(u, v, lev, h, stats)
        };
        let hp = self.div.ancestor_at(u, h - 1);
        stats.mssp_probes += 2;
        let du = self.rev_forests[&hp]
            .dist(w, u)
            .expect("splitter must reach the source");
        let dv = self.fwd_forests[&hp]
            .dist(w, v)
            .expect("splitter must reach the target");
        Some((du + dv, Route::Via(w)))
    }

    /// A splitter vertex on `bot(R_{h-1})` lying on a shortest `u -> v`
    /// path, found by growing candidate sets through the stored diagrams.
    /// Callers must have `lev = lev(u)`, `h = anc(u, v) > lev + 1`, `v`
    /// reachable from `u` and outside `u`'s level-1 piece.
    pub fn get_last(
        &self,
        u: Vertex,
        v: Vertex,
        lev: u32,
        h: u32,
        stats: &mut QueryStats,
    ) -> Vertex {
        let mut cands = vec![u];
        for i in lev + 1..h {
            let mut next: Vec<Vertex> = Vec::with_capacity(2 * cands.len());
            for &w in &cands {
                for c in self.next_candidates(w, i, v, stats) {
                    if !next.contains(&c) {
                        next.push(c);
                    }
                }
            }
            assert!(
                !next.is_empty(),
                "candidate set died at level {i} for u={u} v={v}"
            );
            assert!(
                next.len() <= 2 * cands.len(),
                "candidate growth bound violated"
            );
            next.sort_unstable();
            cands = next;
            stats.max_candidate_set = stats.max_candidate_set.max(cands.len());
        }
        // Final argmin over the stored forests; ties go to the earliest
        // candidate in bot order.
        let hp = self.div.ancestor_at(u, h - 1);
        let hp_rect = self.decomp.rect(hp);
        let rev = &self.rev_forests[&hp];
        let fwd = &self.fwd_forests[&hp];
        let mut keys: Vec<(usize, Vertex)> = cands
            .iter()
            .map(|&w| (hp_rect.bot_index(w).expect("candidates live on bot"), w))
            .collect();
        keys.sort_unstable();
        let mut best: Option<(u64, Vertex)> = None;
        for (_, w) in keys {
            stats.mssp_probes += 2;
            let (Some(du), Some(dv)) = (rev.dist(w, u), fwd.dist(w, v)) else {
                continue;
            };
            let total = du + dv;
            if best.is_none_or(|(bd, _)| total < bd) {
                best = Some((total, w));
            }
        }
        best.expect("some candidate lies on a shortest path").1
    }

    /// At most two sites of `VD(w, R_i)`, one of which owns `v`. `w` lies on
    /// `bot(R_{i-1})` of the query source's chain; `v` must not be interior
    /// to `R_i` nor on its top side.
    pub fn next_candidates(
        &self,
        w: Vertex,
        i: u32,
        v: Vertex,
        stats: &mut QueryStats,
    ) -> Vec<Vertex> {
        let q = self.div.ancestor_at(w, i);
        let q_rect = self.decomp.rect(q);
        if q_rect.on_bot(v) {
            // The target itself is a site of this diagram.
            return vec![v];
        }
        if let Some(min_level) = stats.min_vd_parent_level {
            assert!(
                i > min_level,
                "construction consulted a diagram at level {i} <= {min_level}"
            );
        }
        let vd = self.vd_for(w, i);
        debug_assert!(vd.q_rect == q_rect, "diagram stored for a different parent");
        let axis = if v.x > q_rect.x2 {
            Axis::Row
        } else {
            Axis::Col
        };
        debug_assert!(axis == Axis::Row || v.y > q_rect.y2);
        let coord = match axis {
            Axis::Row => v.x,
            Axis::Col => v.y,
        };
        let gamma = vd.gamma(axis);
        if gamma.is_empty_at(coord) {
            // Happens only for candidates that cannot reach v; they simply
            // contribute nothing.
            return Vec::new();
        }
        stats.gamma_searches += 1;
        let hit = gamma.search(coord, |site| self.probe(vd, site, v, axis, stats));
        hit.candidates()
            .map(|s| q_rect.bot_at(s as usize))
            .collect()
    }

    /// The stored diagram `VD(w, R_i)`: the singleton diagram for level 1,
    /// otherwise the piece diagram keyed by `w`'s level-`i-1` ancestor.
    pub fn stored_vd(&self, w: Vertex, i: u32) -> &VoronoiRepr {
        self.vd_for(w, i)
    }

    fn vd_for(&self, w: Vertex, i: u32) -> &VoronoiRepr {
        if i == 1 {
            &self.vertex_vds[self.g.vid(w)]
        } else {
            let p = self.div.ancestor_at(w, i - 1);
            let idx = self
                .decomp
                .rect(p)
                .bot_index(w)
                .expect("candidate must lie on its piece's bot");
            &self.piece_vds[&p][idx]
        }
    }

    /// Classify `v` against the stored path of `site` in `vd`.
    fn probe(
        &self,
        vd: &VoronoiRepr,
        site: u32,
        v: Vertex,
        axis: Axis,
        stats: &mut QueryStats,
    ) -> Side {
        stats.mssp_probes += 1;
        let rec = vd.records[site as usize]
            .as_ref()
            .expect("gamma members have records");
        let sv = vd.q_rect.bot_at(site as usize);
        match rec.repr {
            PathRepr::Straight | PathRepr::Explicit(_) => probe_stored_path(sv, rec, v, axis),
            PathRepr::Split { mid } => self.probe_split(sv, rec.last, mid, v, axis),
        }
    }

    /// Probe a path stored as (site, mid, last): the prefix lives in the
    /// reverse forest of the splitter's piece rooted at mid, the suffix in
    /// the forward forest above it. Out-of-region cases resolve by geometry.
    fn probe_split(&self, s: Vertex, last: Vertex, mid: Vertex, v: Vertex, axis: Axis) -> Side {
        let h = self.div.anc(&self.decomp, s, last);
        debug_assert!(h >= 2, "split paths always span at least two levels");
        let hp = self.div.ancestor_at(s, h - 1);
        let prefix = match axis {
            Axis::Row => v.x < mid.x || (v.x == mid.x && v.y < mid.y),
            Axis::Col => v.y < mid.y || (v.y == mid.y && v.x < mid.x),
        };
        if prefix {
            // Prefix runs s -> mid inside rect(hp).
            if v.y > mid.y {
                return Side::UpperRight;
            }
            if v.x > mid.x {
                return Side::LowerLeft;
            }
            let r = self.decomp.rect(hp);
            if v.y < r.y1 {
                return Side::LowerLeft;
            }
            if v.x < r.x1 {
                return Side::UpperRight;
            }
            debug_assert!(r.contains(v));
            self.rev_forests[&hp].side_of_path(mid, s, v, axis)
        } else {
            // Suffix runs mid -> last inside parent(hp) minus interior(hp).
            if v.y < mid.y {
                return Side::LowerLeft;
            }
            if v.x < mid.x {
                return Side::UpperRight;
            }
            let region = *self.fwd_forests[&hp].region();
            let r = region.rect;
            if v.y > r.y2 {
                return Side::UpperRight;
            }
            if v.x > r.x2 {
                return Side::LowerLeft;
            }
            debug_assert!(region.contains(v));
            self.fwd_forests[&hp].side_of_path(mid, last, v, axis)
        }
    }

    fn check_range(&self, i: usize, j: usize, a: usize, b: usize) -> Result<(), QueryError> {
        if i > j || j > self.g.m() || a > b || b > self.g.n() {
            return Err(QueryError::OutOfRange { i, j, a, b });
        }
        Ok(())
    }

    /// Alignment score of `S[i..j)` vs `T[a..b)` under the built cost model.
    pub fn alignment_score(
        &self,
        i: usize,
        j: usize,
        a: usize,
        b: usize,
    ) -> Result<u64, QueryError> {
        let mut stats = QueryStats::default();
        self.alignment_score_with(i, j, a, b, &mut stats)
    }

    pub fn alignment_score_with(
        &self,
        i: usize,
        j: usize,
        a: usize,
        b: usize,
        stats: &mut QueryStats,
    ) -> Result<u64, QueryError> {
        self.check_range(i, j, a, b)?;
        let (d, _) = self
            .dist_query_with(
                Vertex::new(i as u32, a as u32),
                Vertex::new(j as u32, b as u32),
                stats,
            )
            .expect("alignment endpoints are always reachable");
        Ok(self.g.cost().score_from_distance(i, j, a, b, d))
    }

    /// Optimal alignment of the two substrings as an edit script, via the
    /// splitter vertex and the two stored forests.
    pub fn alignment_path(
        &self,
        i: usize,
        j: usize,
        a: usize,
        b: usize,
    ) -> Result<AlignmentTrace, QueryError> {
        self.check_range(i, j, a, b)?;
        let u = Vertex::new(i as u32, a as u32);
        let v = Vertex::new(j as u32, b as u32);
        let mut stats = QueryStats::default();
        let (d, route) = self.dist_query_with(u, v, &mut stats).expect("reachable");
        let path = match route {
            Route::Direct => dp_trace(&self.g, u, v),
            Route::Via(w) => {
                let h = self.div.anc(&self.decomp, u, v);
                let hp = self.div.ancestor_at(u, h - 1);
                // The reverse-forest path runs w -> u in the flipped graph.
                let mut pre = self.rev_forests[&hp].extract_path(w, u);
                pre.reverse();
                let suf = self.fwd_forests[&hp].extract_path(w, v);
                pre.extend_from_slice(&suf[1..]);
                pre
            }
        };
        debug_assert_eq!(path.first(), Some(&u));
        debug_assert_eq!(path.last(), Some(&v));
        let mut ops: Vec<(u32, EditOp)> = Vec::new();
        let mut matches = Vec::new();
        for pair in path.windows(2) {
            let (p, q) = (pair[0], pair[1]);
            let op = match (q.x - p.x, q.y - p.y) {
                (1, 0) => EditOp::Del,
                (0, 1) => EditOp::Ins,
                (1, 1) => {
                    if self.g.s_char(p.x as usize) == self.g.t_char(p.y as usize) {
                        matches.push(self.g.s_char(p.x as usize) as u8);
                        EditOp::Match
                    } else {
                        EditOp::Subst
                    }
                }
                _ => unreachable!("non-unit step in an extracted path"),
            };
            match ops.last_mut() {
                Some((n, last)) if *last == op => *n += 1,
                _ => ops.push((1, op)),
            }
        }
        Ok(AlignmentTrace {
            ops,
            matches,
            distance: d,
        })
    }

    /// Structural fingerprint over the stored diagrams; used by determinism
    /// checks.
    pub fn fingerprint(&self) -> u64 {
        let mut h = 0xcbf29ce484222325u64;
        let mut eat = |x: u64| {
            h ^= x;
            h = h.wrapping_mul(0x100000001b3);
        };
        for vd in self.all_vds() {
            eat(vd.q.0 as u64);
            for (s, rec) in vd.records.iter().enumerate() {
                if let Some(r) = rec {
                    eat(s as u64);
                    eat(((r.last.x as u64) << 32) | r.last.y as u64);
                    eat(r.weight);
                    eat(match &r.repr {
                        PathRepr::Straight => 1,
                        PathRepr::Explicit(p) => 2 + p.len() as u64,
                        PathRepr::Split { mid } => ((mid.x as u64) << 32) | mid.y as u64,
                    });
                }
            }
        }
        h
    }
}
