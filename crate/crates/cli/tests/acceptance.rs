//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any outcome differs from the expected one.

use std::process::{Command, Output};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

use tcnkit::driver::{compute_tcn, find_blocks, verify_witness, SweepOptions, Tcn, Witness};
use tcnkit::dual::skeleton_of;
use tcnkit::fixtures;
use tcnkit::graph::{canonical_key, lower_bound_formula, tcn_lower_bound, Multigraph};
use tcnkit::lattice::{enumerate_lattice_polygons, LatticePoint, LatticePolygon};
use tcnkit::rational;
use tcnkit::regularity::{check_regular, subdivision_from_heights, HeightCertificate, Regularity};
use tcnkit::subdivision::{
    enumerate_nodal_subdivisions, enumerate_unimodular_triangulations, exact_cover_triangulations, glue_maps, patch,
    placing_permutation_triangulations, EnumerationBudget, Subdivision,
};

type Check = Result<String, String>;

fn tcnkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tcnkit")).args(args).env_remove("TCNKIT_CACHE").output().unwrap()
}

fn json_of(out: &Output) -> Result<Value, String> {
    if !out.status.success() {
        return Err(format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr).trim()));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn de<T: serde::de::DeserializeOwned>(v: &Value) -> Result<T, String> {
    serde_json::from_value(v.clone()).map_err(|e| e.to_string())
}

fn polygon_catalog() -> Check {
    let mut counts = Vec::new();
    for g in ["3", "4", "5"] {
        let v = json_of(&tcnkit(&["polygons", "--genus", g]))?;
        for p in v["polygons"].as_array().unwrap() {
            let poly: LatticePolygon = de(&serde_json::json!({"vertices": p["vertices"]}))?;
            ensure(poly.genus().to_string() == g, format!("polygon of genus {} listed under {g}", poly.genus()))?;
            ensure(!poly.is_hyperelliptic().unwrap(), "hyperelliptic polygon listed")?;
        }
        counts.push(v["count"].as_u64().unwrap());
    }
    ensure(counts == [1, 3, 4], format!("counts {counts:?}"))?;
    Ok("1, 3, 4 polygons for genus 3, 4, 5".into())
}

fn genus3_classification() -> Check {
    let v = json_of(&tcnkit(&["classify", "--genus", "3"]))?;
    let graphs = v["graphs"].as_array().unwrap();
    ensure(graphs.len() == 5, format!("{} genus-3 graphs", graphs.len()))?;
    let lollipop = canonical_key(&fixtures::lollipop()).unwrap().to_string();
    let mut verified = 0;
    for e in graphs {
        let g: Multigraph = de(&e["graph"])?;
        if e["verdict"] == "non_troplanar" {
            ensure(e["key"] == lollipop.as_str(), "a graph other than the lollipop is non-troplanar")?;
            continue;
        }
        ensure(e["key"] != lollipop.as_str(), "lollipop has a witness")?;
        let w: Witness = de(&e["witness"])?;
        verify_witness(&g, &w, 0).map_err(|e| e.to_string())?;
        w.heights.verify(&w.subdivision).map_err(|e| e.to_string())?;
        verified += 1;
    }
    ensure(v["non_troplanar"] == 1 && verified == 4, "expected 4 witnesses and 1 non-troplanar graph")?;
    Ok("lollipop is the only non-troplanar graph; 4 witnesses verified".into())
}

fn level_statuses(v: &Value) -> Vec<String> {
    v["levels"].as_array().unwrap().iter().map(|l| l["status"].as_str().unwrap().to_string()).collect()
}

fn checked_witness(v: &Value, g: &Multigraph, nodes: usize) -> Result<(), String> {
    let w: Witness = de(&v["witness"])?;
    verify_witness(g, &w, nodes).map_err(|e| e.to_string())?;
    // recompute the skeleton from scratch rather than trusting the stored one
    let sk = skeleton_of(&w.subdivision).map_err(|e| e.to_string())?;
    let k = sk.result.connected().ok_or("witness skeleton is not connected")?;
    ensure(canonical_key(k).unwrap() == canonical_key(g).unwrap(), "witness skeleton is a different graph")?;
    ensure(w.subdivision.node_count() == nodes, "wrong node count")
}

fn k33(tcn_values: &mut Vec<(&'static str, Value)>) -> Check {
    let v = json_of(&tcnkit(&["tcn", "--named", "k33", "--max-nodes", "1"]))?;
    let st = level_statuses(&v);
    ensure(st == ["exhausted", "matched"], format!("levels {st:?}"))?;
    ensure(v["tcn"] == 1, format!("tcn {}", v["tcn"]))?;
    checked_witness(&v, &fixtures::k33(), 1)?;
    let c0 = &v["levels"][0];
    let msg = format!("c=0 exhausted over {} triangulations, c=1 witness verified", c0["triangulations"]);
    tcn_values.push(("K33", v));
    Ok(msg)
}

fn lollipop(tcn_values: &mut Vec<(&'static str, Value)>) -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cp = dir.path().join("lollipop.jsonl");
    let v = json_of(&tcnkit(&["tcn", "--named", "lollipop", "--max-nodes", "3", "--deep", "--checkpoint", cp.to_str().unwrap()]))?;
    let st = level_statuses(&v);
    ensure(st == ["exhausted", "exhausted", "exhausted", "matched"], format!("levels {st:?}"))?;
    ensure(v["tcn"] == 3, format!("tcn {}", v["tcn"]))?;
    checked_witness(&v, &fixtures::lollipop(), 3)?;
    let lines = std::fs::read_to_string(&cp).map_err(|e| e.to_string())?.lines().count();
    ensure(lines > 0, "checkpoint is empty")?;
    let subs: Vec<String> = v["levels"].as_array().unwrap().iter().map(|l| l["subdivisions"].to_string()).collect();
    tcn_values.push(("lollipop", v));
    Ok(format!("c=0,1,2 exhausted (100% coverage, {} subdivisions), c=3 witness verified", subs[..3].join("/")))
}

fn genus4_sweep() -> Result<Value, String> {
    json_of(&tcnkit(&["audit", "--level", "sweep", "--genus", "4", "--nodes", "1"]))
}

fn genus_identity(r: &Value) -> Check {
    ensure(r["complete"] == true, "sweep incomplete")?;
    ensure(r["disconnected"] == 0 && r["trivial"] == 0, "unexpected non-connected skeletons")?;
    let v = r["violations"].as_array().unwrap();
    ensure(v.iter().all(|x| !x.as_str().unwrap().contains("genus")), format!("{} violations", v.len()))?;
    Ok(format!("{} connected skeletons of genus 3", r["connected"]))
}

fn two_crossing_parity(r: &Value) -> Check {
    let v = r["violations"].as_array().unwrap();
    ensure(v.is_empty(), format!("{} violations, first {:?}", v.len(), v.first()))?;
    ensure(r["multi_block"].as_u64().unwrap() > 0, "no skeleton has two blocks; the check is vacuous")?;
    Ok(format!("{} skeletons with several 2-connected components, none sharing one node", r["multi_block"]))
}

fn hyperelliptic() -> Check {
    let r = json_of(&tcnkit(&["audit", "--level", "hyperelliptic", "--genus", "4", "--nodes", "2"]))?;
    ensure(r["complete"] == true, "incomplete")?;
    ensure(r["violations"].as_array().unwrap().is_empty(), "violations")?;
    Ok(format!("{} connected skeletons over c <= 2, all chains", r["connected"]))
}

fn round_trips(s: &Subdivision) -> Result<bool, String> {
    match check_regular(s).map_err(|e| e.to_string())? {
        Regularity::Regular(h) => {
            h.verify(s).map_err(|e| e.to_string())?;
            let back = subdivision_from_heights(s.polygon(), &h.heights).map_err(|e| e.to_string())?;
            ensure(back.matches(s), format!("heights do not reproduce {s}"))?;
            Ok(true)
        }
        Regularity::NotRegular(f) => {
            f.verify(s).map_err(|e| e.to_string())?;
            Ok(false)
        }
    }
}

fn regularity_engine() -> Check {
    let pin = fixtures::pinwheel_triangulation();
    match check_regular(&pin).map_err(|e| e.to_string())? {
        Regularity::NotRegular(f) => f.verify(&pin).map_err(|e| e.to_string())?,
        Regularity::Regular(_) => return Err("pinwheel accepted".into()),
    }
    let mut regular = 0;
    let mut rejected = 0;
    for p in [&[(0, 0), (3, 0), (0, 3)][..], &[(0, 0), (3, 0), (3, 2), (0, 2)], &[(0, 0), (2, 0), (4, 4), (0, 2)]] {
        let p = LatticePolygon::from_coords(p).unwrap();
        let ts = enumerate_unimodular_triangulations(&p, &EnumerationBudget { max_triangulations: Some(3000), max_queue: None })
            .map_err(|e| e.to_string())?;
        for t in ts {
            let r = round_trips(&t.triangulation)?;
            ensure(r == t.regular, "enumeration flag disagrees with the certificate")?;
            if r {
                regular += 1;
            } else {
                rejected += 1;
            }
        }
        for c in 1..=2 {
            for (s, h) in enumerate_nodal_subdivisions(&p, c, &EnumerationBudget::unlimited()).map_err(|e| e.to_string())? {
                h.verify(&s).map_err(|e| e.to_string())?;
                ensure(round_trips(&s)?, "nodal subdivision lost its regularity")?;
                regular += 1;
            }
        }
    }
    Ok(format!("pinwheel refuted; {regular} regular verdicts round-trip, {rejected} Farkas certificates verify"))
}

fn patching() -> Check {
    let shapes: [&[(i64, i64)]; 5] = [
        &[(0, 0), (1, 0), (0, 1)],
        &[(0, 0), (1, 0), (1, 1), (0, 1)],
        &[(0, 0), (1, 0), (2, 1), (2, 2), (1, 2), (0, 1)],
        &[(0, 0), (2, 0), (3, 1), (0, 2)],
        &[(0, 0), (3, 0), (2, 1), (0, 2)],
    ];
    let mut pool = Vec::new();
    for c in &shapes {
        let p = LatticePolygon::from_coords(c).unwrap();
        for n in 0..=2 {
            for (s, _) in enumerate_nodal_subdivisions(&p, n, &EnumerationBudget::unlimited()).map_err(|e| e.to_string())? {
                pool.push(s);
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0x7c0);
    let mut done = 0;
    let mut attempts = 0;
    while done < 200 {
        attempts += 1;
        ensure(attempts < 20_000, "could not find enough gluable pairs")?;
        let mut cur = pool[rng.gen_range(0..pool.len())].clone();
        for _ in 0..rng.gen_range(1..=3) {
            let edges: Vec<(LatticePoint, LatticePoint)> =
                cur.polygon().edges().filter(|(a, b)| (*b - *a).lattice_length() == 1).collect();
            if edges.is_empty() {
                break;
            }
            let other = &pool[rng.gen_range(0..pool.len())];
            let gl = glue_maps(cur.polygon(), edges[rng.gen_range(0..edges.len())], other.polygon()).map_err(|e| e.to_string())?;
            if gl.is_empty() {
                continue;
            }
            let nodes = cur.node_count() + other.node_count();
            cur = patch(&cur, other, &gl[rng.gen_range(0..gl.len())]).map_err(|e| e.to_string())?;
            ensure(cur.node_count() == nodes, "patch changed the node count")?;
            // independent of the check inside patch
            ensure(round_trips(&cur)?, format!("patched subdivision not regular: {cur}"))?;
            done += 1;
        }
    }
    Ok(format!("{done} patch compositions regular, 0 failures"))
}

fn stitching() -> Check {
    let mut parts = Vec::new();
    for (d, k) in [(0, 1), (1, 1), (1, 2), (0, 2), (2, 3)] {
        let v = json_of(&tcnkit(&["stitch", "--d", &d.to_string(), "--k", &k.to_string()]))?;
        let s: Subdivision = de(&v["subdivision"])?;
        let h: HeightCertificate = de(&v["heights"])?;
        h.verify(&s).map_err(|e| e.to_string())?;
        ensure(s.node_count() == k, format!("({d},{k}): {} nodes", s.node_count()))?;
        let blocks: Vec<&str> = v["blocks"].as_array().unwrap().iter().map(|b| b.as_str().unwrap()).collect();
        let np = blocks.iter().filter(|b| **b == "non_planar").count();
        let cr = blocks.iter().filter(|b| **b == "crowded").count();
        ensure(np == d && cr == k - d, format!("({d},{k}): blocks {blocks:?}"))?;
        let g: Multigraph = de(&v["skeleton"])?;
        let sk = skeleton_of(&s).map_err(|e| e.to_string())?;
        ensure(
            sk.result.connected() == Some(&g),
            "reported skeleton differs from the recomputed one",
        )?;
        let lb = rational::parse(v["lower_bound"].as_str().unwrap()).map_err(|e| e.to_string())?;
        ensure(lb <= BigRational::from_integer(BigInt::from(k)), "lower bound above k")?;
        parts.push(format!("({d},{k}) g={} lb={}", g.genus(), rational::format(&lb)));
    }
    let found = find_blocks(10).map_err(|e| e.to_string())?.ok_or("block search found nothing")?;
    ensure(found == fixtures::stitch_blocks(), "block search no longer reproduces the built-in pair")?;
    Ok(format!("{}; TCN = k itself not exhausted at these genera", parts.join(", ")))
}

fn oracle_equivalence() -> (bool, Result<String, String>) {
    let mut mismatched = Vec::new();
    let mut first = None;
    let mut checked = 0;
    let mut any = false;
    let mut run = || -> Result<(), String> {
        for k in 3..=10 {
            let mut bad = 0;
            for p in enumerate_lattice_polygons(k) {
                let bfs: Vec<Subdivision> = enumerate_unimodular_triangulations(&p, &EnumerationBudget::unlimited())
                    .map_err(|e| e.to_string())?
                    .into_iter()
                    .map(|r| r.triangulation)
                    .collect();
                let cover = exact_cover_triangulations(&p).map_err(|e| e.to_string())?;
                ensure(bfs == cover, format!("flip BFS differs from exact cover on {p}"))?;
                let placing = placing_permutation_triangulations(&p).map_err(|e| e.to_string())?;
                ensure(placing.iter().all(|t| bfs.contains(t)), format!("placing produced a non-triangulation on {p}"))?;
                if placing.len() != bfs.len() {
                    bad += 1;
                    any = true;
                    if first.is_none() {
                        first = Some(format!("first at {p}: bfs {} vs placing {}", bfs.len(), placing.len()));
                    }
                }
                checked += 1;
            }
            mismatched.push(format!("k={k}: {bad}"));
        }
        Ok(())
    };
    if let Err(e) = run() {
        return (false, Err(e));
    }
    if !any {
        return (false, Ok(format!("{checked} polygons, all three enumerations agree")));
    }
    let first = first.unwrap_or_default();
    let summary = format!(
        "{checked} polygons; flip BFS = exact cover everywhere; placing is a strict subset on {} ({first})",
        mismatched.join(", ")
    );
    // star triangulations around a centre of degree 6 or more are not placing
    // triangulations, so set equality cannot hold from 7 lattice points on
    let expected = first.contains("bfs 18 vs placing 17")
        && mismatched[..7] == ["k=3: 0", "k=4: 0", "k=5: 0", "k=6: 0", "k=7: 1", "k=8: 2", "k=9: 11"];
    (expected, Err(summary))
}

fn lower_bounds(tcn_values: &[(&'static str, Value)]) -> Check {
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let theta = compute_tcn(&fixtures::theta(), 0, &SweepOptions::default()).map_err(|e| e.to_string())?;
    ensure(theta.tcn == Tcn::Exact(0), "theta is not troplanar")?;
    let mut rows = vec![("theta", theta.lower_bound.clone(), 0)];
    for (name, v) in tcn_values {
        rows.push((name, rational::parse(v["lower_bound"].as_str().unwrap()).unwrap(), v["tcn"].as_i64().unwrap()));
    }
    let want = [("theta", 0), ("K33", 1), ("lollipop", 3)];
    ensure(rows.iter().map(|r| (r.0, r.2)).eq(want.iter().copied()), format!("resolved instances {:?}", rows.iter().map(|r| (r.0, r.2)).collect::<Vec<_>>()))?;
    for (name, lb, t) in &rows {
        ensure(*lb <= q(*t, 1), format!("{name}: bound {lb} above {t}"))?;
    }
    ensure(tcn_lower_bound(&fixtures::k33()).unwrap() == q(0, 1), "K33 bound")?;
    // 3/8 (tw - 2)^2 - g + 1/2 over a common denominator of 8
    for tw in 0..12usize {
        for g in -2..12i64 {
            let t = tw as i64 - 2;
            ensure(lower_bound_formula(tw, g) == q(3 * t * t - 8 * g + 4, 8), format!("formula at tw={tw}, g={g}"))?;
        }
    }
    ensure(lower_bound_formula(3, 4) == q(-25, 8) && lower_bound_formula(8, 5) == q(9, 1), "formula fixtures")?;
    Ok(format!("{}; formula exact on 168 rational fixtures", rows.iter().map(|(n, lb, t)| format!("{n}: {lb} <= {t}")).collect::<Vec<_>>().join(", ")))
}

fn main() {
    // `cargo test -- --list` and friends pass harness flags through
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let mut unexpected = 0;
    let mut report = |n: usize, expected_pass: bool, t: Instant, r: Check| {
        let secs = t.elapsed().as_secs_f64();
        let (tag, text) = match &r {
            Ok(m) => ("PASS", m.clone()),
            Err(m) => ("FAIL", m.clone()),
        };
        let note = if r.is_ok() != expected_pass { " [unexpected]" } else if !expected_pass { " [known]" } else { "" };
        println!("criterion {n:>2}: {tag}{note} ({secs:.1}s) {text}");
        if r.is_ok() != expected_pass {
            unexpected += 1;
        }
    };
    let mut tcns = Vec::new();

    let t = Instant::now();
    report(1, true, t, polygon_catalog());
    let t = Instant::now();
    report(2, true, t, genus3_classification());
    let t = Instant::now();
    report(3, true, t, k33(&mut tcns));
    let t = Instant::now();
    report(4, true, t, lollipop(&mut tcns));
    let t = Instant::now();
    match genus4_sweep() {
        Ok(r) => {
            report(5, true, t, genus_identity(&r));
            report(6, true, t, two_crossing_parity(&r));
        }
        Err(e) => {
            report(5, true, t, Err(e.clone()));
            report(6, true, t, Err(e));
        }
    }
    let t = Instant::now();
    report(7, true, t, hyperelliptic());
    let t = Instant::now();
    report(8, true, t, regularity_engine());
    let t = Instant::now();
    report(9, true, t, patching());
    let t = Instant::now();
    report(10, true, t, stitching());
    let t = Instant::now();
    let (as_documented, r) = oracle_equivalence();
    // set equality is false; the run is only unexpected if the failure differs
    // from the documented one
    report(11, !as_documented, t, r);
    let t = Instant::now();
    report(12, true, t, lower_bounds(&tcns));

    if unexpected > 0 {
        println!("{unexpected} unexpected outcomes");
        std::process::exit(1);
    }
}
