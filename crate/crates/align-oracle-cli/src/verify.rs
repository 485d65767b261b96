//! Self-check suites behind `align-oracle verify`: every backend against the
//! brute-force DP at configurable scale, plus structural invariants of the
//! stored Voronoi diagrams and DDGs. Failures echo the seed and the first
//! counterexample so a run can be reproduced verbatim.

use crate::{AnyOracle, Backend, Config, VerifyArgs};
use align_oracle::decomp::Decomposition;
use align_oracle::grid::{AlignmentGraph, CostModel, DpOracle};
use align_oracle::oracle::{OracleIndex, OracleParams};
use align_oracle::rng::SplitMix64;
use align_oracle::sublinear::{
    build_ddg, verify_monge, MongeCompressedDdg, StorageMode, WarmupOracle,
};
use align_oracle::voronoi::BruteVoronoi;
use align_oracle::Vertex;

struct Suite<'a> {
    failures: &'a mut Vec<String>,
}

impl Suite<'_> {
    fn check(&mut self, name: &str, outcome: Result<(), String>) {
        match outcome {
            Ok(()) => println!("suite {name}: PASS"),
            Err(msg) => {
                println!("suite {name}: FAIL {msg}");
                self.failures.push(format!("{name}: {msg}"));
            }
        }
    }
}

pub(crate) fn run(args: &VerifyArgs) -> Result<bool, String> {
    let seed = args.config.seed;
    let mut failures = Vec::new();
    let mut suite = Suite {
        failures: &mut failures,
    };

    suite.check("known-examples", known_examples(&args.config));
    suite.check(
        "oracle-vs-dp",
        oracle_vs_dp(
            seed,
            if args.full { 16 } else { 10 },
            if args.full { 5 } else { 1 },
            args.inject_fault,
        ),
    );
    suite.check(
        "voronoi-equivalence",
        voronoi_equivalence(seed, if args.full { 24 } else { 12 }),
    );
    suite.check("gamma-structure", gamma_structure(seed));
    suite.check("monge", monge(seed, if args.full { 64 } else { 32 }));
    suite.check(
        "sublinear-vs-dp",
        sublinear_vs_dp(seed, if args.full { 16 } else { 10 }),
    );
    suite.check("determinism", determinism(seed));

    Ok(failures.is_empty())
}

fn strings(seed: u64, m: usize, n: usize) -> (Vec<u8>, Vec<u8>) {
    let mut rng = SplitMix64::new(seed);
    (rng.bytes(m, b"abcd"), rng.bytes(n, b"abcd"))
}

fn known_examples(config: &Config) -> Result<(), String> {
    for backend in [Backend::Oracle, Backend::Warmup, Backend::Compressed] {
        let cfg = Config {
            backend,
            ..config.clone()
        };
        let mut cfg = cfg;
        cfg.model = crate::Model::Lcs;
        cfg.weights = None;
        let o = AnyOracle::build(b"abac", b"abcab", &cfg)?;
        let got = o.score(0, 4, 0, 5)?;
        if got != 3 {
            return Err(format!("abac/abcab full LCS: expected 3, got {got}"));
        }
        if let AnyOracle::Main(m) = &o {
            let d = m.dist_query(Vertex::new(0, 0), Vertex::new(4, 5));
            if d != Some(6) {
                return Err(format!("abac/abcab distance: expected 6, got {d:?}"));
            }
        }
        let o = AnyOracle::build(b"acbcddaaea", b"abbbccdec", &cfg)?;
        let got = o.score(0, 10, 0, 9)?;
        if got != 5 {
            return Err(format!("ten-char example LCS: expected 5, got {got}"));
        }
    }
    Ok(())
}

fn oracle_vs_dp(seed: u64, size: usize, seeds: u64, inject_fault: bool) -> Result<(), String> {
    for s_off in 0..seeds {
        for cost in [CostModel::Lcs, CostModel::Levenshtein] {
            let (s, t) = strings(seed + s_off, size, size);
            let (o, _) = OracleIndex::build(
                &s,
                &t,
                cost,
                OracleParams {
                    ratio: 4,
                    leaf_target: 8,
                },
            )
            .map_err(|e| e.to_string())?;
            let dp = DpOracle::new(o.graph());
            for i in 0..=size {
                for j in i..=size {
                    for a in 0..=size {
                        for b in a..=size {
                            let mut got =
                                o.alignment_score(i, j, a, b).map_err(|e| e.to_string())?;
                            if inject_fault && (i, j, a, b) == (0, size, 0, size) {
                                got += 1;
                            }
                            let expect = dp.score(i, j, a, b).map_err(|e| e.to_string())?;
                            if got != expect {
                                return Err(format!(
                                    "seed={} cost={cost:?} query=({i},{j},{a},{b}) expected={expect} got={got} S={:?} T={:?}",
                                    seed + s_off,
                                    String::from_utf8_lossy(&s),
                                    String::from_utf8_lossy(&t),
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn voronoi_equivalence(seed: u64, size: usize) -> Result<(), String> {
    let (s, t) = strings(seed.wrapping_add(101), size, size);
    let (o, _) = OracleIndex::build(
        &s,
        &t,
        CostModel::Lcs,
        OracleParams {
            ratio: 4,
            leaf_target: 8,
        },
    )
    .map_err(|e| e.to_string())?;
    for vd in o.all_vds() {
        let brute = BruteVoronoi::build(o.graph(), vd.q_rect, &vd.omega);
        let lasts = brute.lasts();
        for (si, rec) in vd.records.iter().enumerate() {
            let got = rec.as_ref().map(|r| r.last);
            if got != lasts[si] {
                return Err(format!(
                    "seed={seed} piece={:?} site={si}: stored last {got:?} vs brute {:?}",
                    vd.q_rect, lasts[si]
                ));
            }
        }
    }
    Ok(())
}

fn gamma_structure(seed: u64) -> Result<(), String> {
    let (s, t) = strings(seed.wrapping_add(202), 16, 16);
    let (o, _) = OracleIndex::build(
        &s,
        &t,
        CostModel::Lcs,
        OracleParams {
            ratio: 4,
            leaf_target: 8,
        },
    )
    .map_err(|e| e.to_string())?;
    let rows = o.graph().rows() as u32;
    for vd in o.all_vds() {
        for x in vd.q_rect.x2 + 1..rows {
            let version = vd.gamma_rows.version_at(x);
            let expect: Vec<u32> = vd
                .records
                .iter()
                .enumerate()
                .filter_map(|(i, r)| {
                    let r = r.as_ref()?;
                    (r.last.x >= x && r.last.x > vd.q_rect.x2).then_some(i as u32)
                })
                .collect();
            if version != expect {
                return Err(format!(
                    "seed={seed} piece={:?} row={x}: version {version:?} vs direct {expect:?}",
                    vd.q_rect
                ));
            }
        }
    }
    Ok(())
}

fn monge(seed: u64, size: usize) -> Result<(), String> {
    let (s, t) = strings(seed.wrapping_add(303), size, size);
    let g = AlignmentGraph::new(&s, &t, CostModel::Levenshtein).map_err(|e| e.to_string())?;
    let decomp = Decomposition::build(g.rows(), g.cols());
    let w = g.cost().weight_bound();
    for depth in 0..=decomp.max_depth().min(6) {
        for &p in decomp.pieces_at_depth(depth) {
            let ddg = build_ddg(&g, &decomp, p, w);
            let violations = verify_monge(&ddg.m, ddg.k, w);
            if let Some(v) = violations.first() {
                return Err(format!("seed={seed} piece={:?}: {v}", decomp.rect(p)));
            }
            let comp = MongeCompressedDdg::build(&ddg, w).map_err(|v| v.to_string())?;
            if comp.nonzeros() > 2 * (ddg.k - 1) * w as usize {
                return Err(format!(
                    "seed={seed}: {} nonzeros exceeds 2(k-1)w = {}",
                    comp.nonzeros(),
                    2 * (ddg.k - 1) * w as usize
                ));
            }
            for i in 0..ddg.k {
                for j in 0..ddg.k {
                    if comp.entry(i, j) != ddg.entry(i, j) {
                        return Err(format!(
                            "seed={seed}: reconstruction differs at ({i},{j}): {} vs {}",
                            comp.entry(i, j),
                            ddg.entry(i, j)
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

fn sublinear_vs_dp(seed: u64, size: usize) -> Result<(), String> {
    for mode in [StorageMode::Dense, StorageMode::Compressed] {
        let (s, t) = strings(seed.wrapping_add(404), size, size);
        let o =
            WarmupOracle::build(&s, &t, CostModel::Lcs, size, mode).map_err(|e| e.to_string())?;
        let dp = DpOracle::new(o.graph());
        for i in 0..=size {
            for j in i..=size {
                for a in 0..=size {
                    for b in a..=size {
                        let got = o.alignment_score(i, j, a, b).map_err(|e| e.to_string())?;
                        let expect = dp.score(i, j, a, b).map_err(|e| e.to_string())?;
                        if got != expect {
                            return Err(format!(
                                "seed={seed} mode={mode:?} query=({i},{j},{a},{b}) expected={expect} got={got}"
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn determinism(seed: u64) -> Result<(), String> {
    let (s, t) = strings(seed.wrapping_add(505), 12, 12);
    let params = OracleParams {
        ratio: 4,
        leaf_target: 8,
    };
    let (a, sa) = OracleIndex::build(&s, &t, CostModel::Lcs, params).map_err(|e| e.to_string())?;
    let (b, sb) = OracleIndex::build(&s, &t, CostModel::Lcs, params).map_err(|e| e.to_string())?;
    if a.fingerprint() != b.fingerprint() {
        return Err(format!(
            "seed={seed}: fingerprints differ: {:016x} vs {:016x}",
            a.fingerprint(),
            b.fingerprint()
        ));
    }
    if sa.vd_records != sb.vd_records || sa.gamma_nodes != sb.gamma_nodes {
        return Err(format!("seed={seed}: build stats differ between runs"));
    }
    Ok(())
}
