//! Acceptance suite: twelve exact criteria, one PASS/FAIL line each.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

use atfgerm::atf::{check_dia_invariance, corner_determinants, delta_m, delta_m_steps, sample_points};
use atfgerm::cli::run;
use atfgerm::germ::{
    extract_germ, germ_equivalent, germ_invariants, germ_product_torus, germ_theta, germ_toric_fibre, germ_upsilon,
    upsilon_versal_pieces, Equivalence, Germ, InvariantKind, InvariantValue,
};
use atfgerm::lattice::{elementary_divisors, hnf_canonical, integral_index};
use atfgerm::locality::{epsilon_threshold, has_property_cs, theorem_d_condition, ChartSpec, Family};
use atfgerm::markov::{is_markov, MarkovTree, MarkovTriple, TreeLimit};
use atfgerm::polytope::{chambers_2d, delta_cp2, dia_boundary, in_triangle, vertices_2d};
use atfgerm::rational::{int, ratio, ExtRational, Rational};
use atfgerm::reduction::{ProductTorusSpec, UpsilonParams};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("atfgerm").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn cli_json(args: &[&str]) -> Result<Value, String> {
    let (code, out, err) = cli(args);
    ensure!(code == 0, "{args:?} exited {code}: {err}");
    serde_json::from_str(&out).map_err(|e| e.to_string())
}

fn triple_of(v: &Value) -> [u64; 3] {
    let a: Vec<u64> = v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    [a[0], a[1], a[2]]
}

fn ints(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let v = cli_json(&["markov", "tree", "--max-entry", "1000"])?;
    let elapsed = start.elapsed();
    let nodes = v["nodes"].as_array().unwrap();
    for n in nodes {
        let t = triple_of(&n["triple"]);
        ensure!(is_markov(t) == Ok(true), "{t:?} violates the Markov equation");
        let m = MarkovTriple::new(t).unwrap();
        for slot in 1..=3 {
            let back = m.mutate(slot).unwrap().mutate(slot).unwrap();
            ensure!(back == m, "slot {slot} mutation is not an involution at {t:?}");
        }
    }
    let v30 = cli_json(&["markov", "tree", "--max-entry", "30"])?;
    let got: BTreeSet<[u64; 3]> = v30["nodes"].as_array().unwrap().iter().map(|n| triple_of(&n["triple"])).collect();
    let want: BTreeSet<[u64; 3]> = [[1, 1, 1], [1, 1, 2], [1, 2, 5], [1, 5, 13], [2, 5, 29]].into();
    ensure!(got == want, "max-entry 30 gave {got:?}");
    ensure!(v30["nodes"].as_array().unwrap().len() == 5, "duplicate triples at max-entry 30");
    ensure!(elapsed.as_secs_f64() < 1.0, "tree to 1000 took {elapsed:?}");
    Ok(format!("{} triples up to 1000 in {:.3}s, involutions hold, 5 triples up to 30", nodes.len(), elapsed.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let tree = MarkovTree::build(TreeLimit::MaxDepth(6)).unwrap();
    let third = ratio(1, 3);
    for i in 0..tree.nodes.len() {
        let (d, m) = delta_m(&tree.path_to(i)).map_err(|e| e.to_string())?;
        ensure!(m == tree.nodes[i].triple, "path reached {m} instead of {}", tree.nodes[i].triple);
        let p = d.polytope();
        ensure!(p.facets().len() == 3, "{m}: {} facets", p.facets().len());
        ensure!(p.facets().iter().all(|f| f.offset == third), "{m}: offsets are not all 1/3");
        let dets = corner_determinants(p);
        let mut got = dets.clone();
        got.sort();
        let mut want: Vec<BigInt> = m.entries().iter().map(|&x| BigInt::from(x) * BigInt::from(x)).collect();
        want.sort();
        ensure!(got == want, "{m}: determinants {got:?}");
        let ns = p.normals();
        for k in 0..3 {
            let root = dets[k].sqrt();
            let diff = ns[k].sub(&ns[(k + 1) % 3]);
            ensure!(
                diff.coords().iter().all(|c| (c % &root).is_zero()),
                "{m}: normal difference {diff} not divisible by {root}"
            );
        }
    }
    Ok(format!("{} triangles at depth <= 6 have offsets 1/3, determinants {{a^2,b^2,c^2}}, divisible differences", tree.nodes.len()))
}

fn criterion_3() -> Outcome {
    let tree = MarkovTree::build(TreeLimit::MaxDepth(5)).unwrap();
    let mut steps_checked = 0;
    for i in 1..tree.nodes.len() {
        let steps = delta_m_steps(&tree.path_to(i)).map_err(|e| e.to_string())?;
        let (before, _, _) = &steps[steps.len() - 2];
        let (after, to, tau) = &steps[steps.len() - 1];
        let report = check_dia_invariance(before, after, tau.as_ref().unwrap(), 1000, i as u64)
            .map_err(|e| e.to_string())?;
        ensure!(report.samples == 1000, "sample count {}", report.samples);
        ensure!(report.passed(), "step to {to}: {} failures, first {:?}", report.failures.len(), report.failures[0]);
        steps_checked += 1;
    }
    Ok(format!("{steps_checked} mutation steps, 1000 samples each, 0 failures"))
}

fn criterion_4() -> Outcome {
    let tree = MarkovTree::build(TreeLimit::MaxDepth(3)).unwrap();
    let mut polygons = vec![delta_cp2()];
    for i in 1..tree.nodes.len() {
        polygons.push(delta_m(&tree.path_to(i)).map_err(|e| e.to_string())?.0.polytope().clone());
    }
    for (pi, p) in polygons.iter().enumerate() {
        let chambers = chambers_2d(p).map_err(|e| e.to_string())?;
        let poly = vertices_2d(p).map_err(|e| e.to_string())?;
        let interior: Vec<_> = sample_points(&poly, 4000, 100 + pi as u64)
            .into_iter()
            .filter(|x| p.contains_strictly(x))
            .take(500)
            .collect();
        ensure!(interior.len() == 500, "only {} interior samples", interior.len());
        for x in &interior {
            let (_, argmin) = dia_boundary(x, p).map_err(|e| e.to_string())?;
            let inside: Vec<usize> = chambers.iter().filter(|(_, t)| in_triangle(x, t)).map(|(i, _)| *i).collect();
            ensure!(inside == argmin, "polygon {pi}: chambers {inside:?} vs argmin {argmin:?}");
        }
    }
    Ok(format!("{} polygons x 500 interior points: chamber = argmin facet", polygons.len()))
}

fn criterion_5() -> Outcome {
    let mut n = 0;
    for k in [2i64, 3, 5] {
        let kq = int(k);
        for (a1, regime) in [(&kq + ratio(1, 2), "d < a2"), (&kq + int(1), "d = a2"), (&kq + int(3), "d > a2")] {
            let p = UpsilonParams::new(k, a1, int(1)).map_err(|e| e.to_string())?;
            let extracted = extract_germ(&upsilon_versal_pieces(&p)).map_err(|e| e.to_string())?;
            ensure!(extracted == germ_upsilon(&p), "k={k} {regime}: {extracted} vs {}", germ_upsilon(&p));
            n += 1;
        }
    }
    Ok(format!("{n} parameter sets: extracted germ equals the closed form"))
}

fn criterion_6() -> Outcome {
    let germ = |k: i64| germ_upsilon(&UpsilonParams::new(k, int(k + 1), int(1)).unwrap());
    let mut pairs = 0;
    for k in 2..=12i64 {
        for k2 in k + 1..=12 {
            match germ_equivalent(&germ(k), &germ(k2)).map_err(|e| e.to_string())? {
                Equivalence::Inequivalent {
                    invariant: InvariantKind::PairwiseIndex,
                    left: InvariantValue::Indices(l),
                    right: InvariantValue::Indices(r),
                } => {
                    ensure!(l == ints(&[1, 1, k]), "k={k}: pairwise {l:?}");
                    ensure!(r == ints(&[1, 1, k2]), "k'={k2}: pairwise {r:?}");
                }
                other => return Err(format!("k={k}, k'={k2}: {other:?}")),
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs 2 <= k < k' <= 12 separated by the pairwise index"))
}

fn criterion_7() -> Outcome {
    let tree = MarkovTree::build(TreeLimit::MaxDepth(5)).unwrap();
    let mut germs = Vec::new();
    for node in &tree.nodes {
        let g = germ_theta(&node.triple, &int(1)).map_err(|e| e.to_string())?;
        let mut want: Vec<BigInt> = node.triple.entries().iter().map(|&x| BigInt::from(x)).collect();
        want.sort();
        let got = germ_invariants(&g).pairwise_index;
        ensure!(got == want, "{}: pairwise {got:?}", node.triple);
        germs.push((node.triple, g));
    }
    for i in 0..germs.len() {
        for j in i + 1..germs.len() {
            let e = germ_equivalent(&germs[i].1, &germs[j].1).map_err(|e| e.to_string())?;
            ensure!(!e.is_equivalent(), "{} and {} are equivalent", germs[i].0, germs[j].0);
        }
    }
    Ok(format!("{} triples at depth <= 5: pairwise index = triple, all pairwise inequivalent", germs.len()))
}

fn criterion_8() -> Outcome {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for trial in 0..200 {
        let n = rng.gen_range(1..=4);
        let k = rng.gen_range(1..=n);
        let m = common::random_matrix(&mut rng, n, k, 9);
        let index = integral_index(&m.columns()).map_err(|e| e.to_string())?;
        let divisors = elementary_divisors(&m);
        let nonzero: BigInt = divisors.iter().filter(|d| !d.is_zero()).product();
        let full_rank = divisors.iter().all(|d| !d.is_zero());
        if full_rank {
            ensure!(index == nonzero, "trial {trial}: index {index} vs divisors {divisors:?}");
        } else {
            ensure!(index.is_zero(), "trial {trial}: dependent columns but index {index}");
        }
    }
    Ok("200 random matrices: integral index = product of elementary divisors".into())
}

fn sample_germs() -> Vec<Germ> {
    let mut gs = Vec::new();
    for k in 2..=4 {
        gs.push(germ_upsilon(&UpsilonParams::new(k, int(k + 1), int(1)).unwrap()));
        gs.push(germ_upsilon(&UpsilonParams::new(k, int(k) + ratio(1, 2), int(1)).unwrap()));
    }
    for t in [[1, 1, 1], [1, 1, 2], [1, 2, 5], [1, 5, 13], [2, 5, 29]] {
        gs.push(germ_theta(&MarkovTriple::new(t).unwrap(), &int(3)).unwrap());
    }
    gs.push(germ_product_torus(&ProductTorusSpec::new(vec![int(1), int(1), int(2)]).unwrap()));
    gs.push(germ_toric_fibre(&delta_cp2(), &[int(0), int(0)]).unwrap());
    let (d, _) = delta_m(&[1]).unwrap();
    gs.push(germ_toric_fibre(d.polytope(), &[int(0), int(0)]).unwrap());
    gs
}

fn criterion_9() -> Outcome {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let germs = sample_germs();
    let mut trials = 0;
    for (gi, g) in germs.iter().enumerate() {
        let inv = germ_invariants(g);
        let partner = germs.iter().find(|h| h.dim() == g.dim() && *h != g).unwrap();
        let baseline = germ_equivalent(g, partner).map_err(|e| e.to_string())?.is_equivalent();
        for _ in 0..100 {
            let phi = common::random_unimodular(&mut rng, g.dim());
            let moved = g.transform(&phi).map_err(|e| e.to_string())?;
            ensure!(germ_invariants(&moved) == inv, "germ {gi}: invariants changed under {:?}", phi.matrix());
            match germ_equivalent(g, &moved).map_err(|e| e.to_string())? {
                Equivalence::Equivalent { witness } => {
                    ensure!(g.transform(&witness).unwrap() == moved, "germ {gi}: witness does not verify");
                }
                other => return Err(format!("germ {gi}: {other:?}")),
            }
            let outcome = germ_equivalent(&moved, partner).map_err(|e| e.to_string())?.is_equivalent();
            ensure!(outcome == baseline, "germ {gi}: comparison outcome changed");
            trials += 1;
        }
    }
    for trial in 0..100 {
        let rows = rng.gen_range(1..=4);
        let cols = rng.gen_range(1..=5);
        let m = common::random_matrix(&mut rng, rows, cols, 9);
        let u = common::random_unimodular(&mut rng, rows);
        let moved = u.matrix().mul(&m).unwrap();
        ensure!(hnf_canonical(&moved) == hnf_canonical(&m), "trial {trial}: HNF differs on the orbit");
    }
    Ok(format!("{trials} germ conjugations and 100 HNF orbit trials unchanged"))
}

fn criterion_10() -> Outcome {
    let chart = |r: Rational, l: ExtRational| ChartSpec::new(r, l).unwrap();
    let inf = ExtRational::Infinite;
    let fin = |x: i64| ExtRational::Finite(int(x));
    let t = ProductTorusSpec::new(vec![int(1), int(2), int(3)]).unwrap();
    ensure!(has_property_cs(&t, &chart(int(8), inf.clone())).holds, "(1,2,3), R=8 should hold");
    ensure!(!has_property_cs(&t, &chart(int(7), inf.clone())).holds, "(1,2,3), R=7 must fail (strict)");
    ensure!(!has_property_cs(&t, &chart(int(8), fin(1))).holds, "(1,2,3), lambda=1 must fail (strict)");
    ensure!(epsilon_threshold(Family::Upsilon, &chart(int(8), fin(5))) == int(4), "upsilon threshold");
    ensure!(epsilon_threshold(Family::Theta, &chart(int(8), fin(5))) == int(5), "theta threshold");
    ensure!(epsilon_threshold(Family::Theta, &chart(int(8), inf.clone())) == int(6), "theta threshold at infinity");
    ensure!(epsilon_threshold(Family::Upsilon, &chart(int(8), inf.clone())) == int(4), "upsilon threshold at infinity");
    let d = |r: Rational, tail: Rational| theorem_d_condition(&int(1), &[tail], &chart(r, inf.clone())).unwrap().holds;
    ensure!(d(int(3), ratio(1, 3)), "a=1, tail=1/3, R=3 should hold");
    ensure!(!d(ratio(5, 3), ratio(1, 3)), "R=5/3 must fail (strict)");
    ensure!(!d(int(3), ratio(1, 4)), "tail 1/4 must fail");
    Ok("CS, epsilon and embedding conditions reproduce the worked values and strict boundaries".into())
}

fn write_cli_json(dir: &Path, name: &str, args: &[&str]) -> Result<String, String> {
    let (code, out, err) = cli(args);
    ensure!(code == 0, "{args:?} exited {code}: {err}");
    let path = dir.join(name);
    std::fs::write(&path, out).map_err(|e| e.to_string())?;
    Ok(path.to_str().unwrap().to_string())
}

fn criterion_11() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let left = write_cli_json(dir.path(), "u.json", &["germ", "upsilon", "-k", "2", "--a1", "3", "--a2", "1"])?;
    let right = write_cli_json(dir.path(), "t.json", &["germ", "theta", "--triple", "1,1,2", "--area", "3"])?;
    let v = cli_json(&["germ", "compare", "--left", &left, "--right", &right])?;
    ensure!(v["result"] == "inequivalent", "result {}", v["result"]);
    ensure!(v["invariant"] == "triple_index", "invariant {}", v["invariant"]);
    ensure!(v["left"] == serde_json::json!([2]) && v["right"] == serde_json::json!([6]), "triple indices {} vs {}", v["left"], v["right"]);
    let pl = &v["pairwise_index"]["left"];
    let pr = &v["pairwise_index"]["right"];
    ensure!(*pl == serde_json::json!([1, 1, 2]) && pl == pr, "pairwise {pl} vs {pr}");
    let flags: Vec<&str> = v["flags"].as_array().map(|a| a.iter().filter_map(Value::as_str).collect()).unwrap_or_default();
    ensure!(flags.contains(&"paper-remark-1.7-discrepancy"), "flags {flags:?}");
    Ok("pairwise {1,1,2} = {1,1,2}, triple index 2 vs 6, discrepancy flag emitted".into())
}

/// Runs every command family once inside `dir`; returns stdout lines and
/// written file contents in order.
fn full_suite(dir: &Path) -> Result<Vec<Vec<u8>>, String> {
    let p = |name: &str| dir.join(name).to_str().unwrap().to_string();
    let mut outputs = Vec::new();
    let mut step = |args: &[&str]| -> Result<String, String> {
        let (code, out, err) = cli(args);
        ensure!(code == 0, "{args:?} exited {code}: {err}");
        outputs.push(out.clone().into_bytes());
        Ok(out)
    };
    step(&["markov", "tree", "--max-entry", "1000"])?;
    let delta = step(&["diagram", "delta-m", "--triple", "1,2,5"])?;
    std::fs::write(p("d.json"), delta).map_err(|e| e.to_string())?;
    step(&["diagram", "mutate", "--in", &p("d.json"), "--node", "0", "--out", &p("m.json")])?;
    step(&["diagram", "render", "--in", &p("d.json"), "--out", &p("d.svg"), "--chambers"])?;
    step(&["diagram", "render", "--in", &p("m.json"), "--out", &p("m.svg"), "--labels"])?;
    let germ = step(&["germ", "theta", "--triple", "1,2,5", "--area", "3"])?;
    std::fs::write(p("g.json"), germ).map_err(|e| e.to_string())?;
    step(&["germ", "upsilon", "-k", "3", "--a1", "4", "--a2", "1"])?;
    step(&["germ", "product", "--a", "1,1,2"])?;
    step(&["germ", "invariants", "--in", &p("g.json")])?;
    step(&["germ", "compare", "--left", &p("g.json"), "--right", &p("g.json")])?;
    step(&["check", "cs", "--torus", "1,2,3", "--radius", "8", "--lambda-s", "inf"])?;
    step(&["check", "epsilon", "--family", "theta", "--radius", "8", "--lambda-s", "5"])?;
    step(&["verify", "dia-invariance", "--triple", "1,5,13", "--samples", "200", "--seed", "3"])?;
    for f in ["m.json", "d.svg", "m.svg"] {
        outputs.push(std::fs::read(p(f)).map_err(|e| e.to_string())?);
    }
    Ok(outputs)
}

fn criterion_12() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let first = full_suite(dir.path())?;
    let second = full_suite(dir.path())?;
    ensure!(first.len() == second.len(), "different number of outputs");
    for (i, (a, b)) in first.iter().zip(&second).enumerate() {
        ensure!(a == b, "output {i} differs between runs");
    }
    let bytes: usize = first.iter().map(Vec::len).sum();
    Ok(format!("{} JSON/SVG outputs ({bytes} bytes) byte-identical across two runs", first.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("markov suite", criterion_1),
        ("markov triangles", criterion_2),
        ("mutation invariance", criterion_3),
        ("chamber oracle", criterion_4),
        ("germ extraction oracle", criterion_5),
        ("upsilon germs distinguish k", criterion_6),
        ("theta germs distinguish triples", criterion_7),
        ("integral index oracle", criterion_8),
        ("unimodular invariance", criterion_9),
        ("locality arithmetic", criterion_10),
        ("discrepancy report", criterion_11),
        ("determinism", criterion_12),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} [{name}]: PASS ({secs:.2}s) {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} [{name}]: FAIL ({secs:.2}s) {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed in {:.2}s", criteria.len() - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
