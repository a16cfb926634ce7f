//! Acceptance criteria, one PASS/FAIL line each. Oracles here are written
//! independently of the library code they check.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use graphon_core::densities::{
    bigraph_density, partial_bigraph_density, partial_density, StepAssignment,
};
use graphon_core::metrics::{bigraphon_metrics, neighborhood_metric, similarity_metric};
use graphon_core::regularity::{
    net_from_partition, ultra_strong_partition, weak_partition_via_net,
};
use graphon_core::setsystems::{
    de_dimension, neighborhood_family, sym_diff_family, thinness_witness, vc_dimension, SetFamily,
};
use graphon_core::zoo::{half_graphon, random_stepfunction, sphere_graphon, Seed};
use graphon_core::{
    aggregate, cut_norm, Bigraph, CutNormMode, Graph, Partition, StepBigraphon, StepGraphon,
    StepKernel,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_measure(k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

fn random_symmetric(k: usize, lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut upper = vec![vec![0.0; k]; k];
    for (i, row) in upper.iter_mut().enumerate() {
        for v in &mut row[i..] {
            *v = rng.random_range(lo..=hi);
        }
    }
    (0..k)
        .map(|i| (0..k).map(|j| upper[i.min(j)][i.max(j)]).collect())
        .collect()
}

fn random_graphon(k: usize, rng: &mut ChaCha8Rng) -> StepGraphon {
    let zero_one = rng.random_bool(0.25);
    let mut rows = random_symmetric(k, 0.0, 1.0, rng);
    if zero_one {
        for row in rows.iter_mut() {
            for v in row.iter_mut() {
                *v = v.round();
            }
        }
    }
    StepGraphon::new(random_measure(k, rng), rows).unwrap()
}

fn random_partition(k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let c = rng.random_range(1..=k);
    let mut labels: Vec<usize> = (0..k).map(|_| rng.random_range(0..c)).collect();
    // Make every label in 0..c occur.
    for (s, l) in labels.iter_mut().enumerate().take(c) {
        *l = s;
    }
    labels
}

/// `max_{S,T} |Σ_{i∈S, j∈T} μ_i μ_j r_ij|` over all subset pairs.
fn brute_cut(mu: &[f64], r: &[Vec<f64>]) -> f64 {
    let k = mu.len();
    let mut best = 0.0f64;
    for s in 0u32..1 << k {
        for t in 0u32..1 << k {
            let mut sum = 0.0;
            for i in (0..k).filter(|i| s >> i & 1 == 1) {
                for j in (0..k).filter(|j| t >> j & 1 == 1) {
                    sum += mu[i] * mu[j] * r[i][j];
                }
            }
            best = best.max(sum.abs());
        }
    }
    best
}

fn c1_cut_norm_oracle() -> Verdict {
    let mut rng = Seed(101).rng();
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let k = rng.random_range(1..=8);
        let mu = random_measure(k, &mut rng);
        let rows = random_symmetric(k, -1.0, 1.0, &mut rng);
        let kernel = StepKernel::new(mu.clone(), rows.clone()).unwrap();
        let exact = cut_norm(&kernel, CutNormMode::Exact).unwrap();
        worst = worst.max((exact - brute_cut(&mu, &rows)).abs());
    }
    check(
        worst <= 1e-12,
        format!("500 kernels, max |Δ| = {worst:.3e}"),
    )
}

/// Average distance to the nearest center in the metric of `W∘W`,
/// computed from scratch.
fn similarity_cost(w: &StepGraphon, centers: &[usize]) -> f64 {
    let k = w.k();
    let mu = w.mu();
    let sq: Vec<Vec<f64>> = (0..k)
        .map(|x| {
            (0..k)
                .map(|y| (0..k).map(|z| mu[z] * w.get(x, z) * w.get(z, y)).sum())
                .collect()
        })
        .collect();
    let dist =
        |x: usize, y: usize| -> f64 { (0..k).map(|z| mu[z] * (sq[x][z] - sq[y][z]).abs()).sum() };
    (0..k)
        .map(|x| {
            mu[x]
                * centers
                    .iter()
                    .map(|&c| dist(x, c))
                    .fold(f64::INFINITY, f64::min)
        })
        .sum()
}

fn partition_cut(w: &StepGraphon, p: &Partition) -> f64 {
    let r = w.difference(&aggregate(w, p).unwrap()).unwrap();
    cut_norm(&r, CutNormMode::Exact).unwrap()
}

fn corpus() -> Vec<StepGraphon> {
    let mut rng = Seed(202).rng();
    (0..200)
        .map(|_| {
            let k = rng.random_range(1..=12);
            random_graphon(k, &mut rng)
        })
        .collect()
}

fn c2_weak_partition(corpus: &[StepGraphon]) -> Verdict {
    let mut worst = f64::NEG_INFINITY;
    let mut runs = 0;
    for w in corpus {
        for eps in [0.02, 0.05, 0.1] {
            let report = weak_partition_via_net(w, eps).map_err(|e| e.to_string())?;
            let centers = report.centers.clone().unwrap();
            let cost = similarity_cost(w, &centers);
            if (cost - report.net_cost.unwrap()).abs() > 1e-9 {
                return Err(format!(
                    "net cost mismatch: {cost} vs {:?}",
                    report.net_cost
                ));
            }
            let cut = partition_cut(w, &report.partition);
            worst = worst.max(cut - 8.0 * cost.sqrt());
            runs += 1;
        }
    }
    check(
        worst <= 1e-9,
        format!("{runs} runs, max (cut - 8·sqrt(cost)) = {worst:.3e}"),
    )
}

fn c3_net_from_partition(corpus: &[StepGraphon]) -> Verdict {
    let mut rng = Seed(303).rng();
    let mut worst = f64::NEG_INFINITY;
    let mut runs = 0;
    for w in corpus {
        for _ in 0..5 {
            let labels = random_partition(w.k(), &mut rng);
            let p = Partition::new(w.mu().to_vec(), labels).unwrap();
            let net = net_from_partition(w, &p).map_err(|e| e.to_string())?;
            let cost = similarity_cost(w, &net.centers);
            let cut = partition_cut(w, &p);
            worst = worst.max(cost - 4.0 * cut);
            runs += 1;
        }
    }
    check(
        worst <= 1e-9,
        format!("{runs} partitions, max (cost - 4·cut) = {worst:.3e}"),
    )
}

fn c4_contraction() -> Verdict {
    let mut rng = Seed(404).rng();
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let k = rng.random_range(1..=15);
        let w = random_graphon(k, &mut rng);
        let r = neighborhood_metric(&w);
        let s = similarity_metric(&w);
        for i in 0..k {
            for j in 0..k {
                worst = worst.max(s.get(i, j) - r.get(i, j));
            }
        }
    }
    check(
        worst <= 1e-12,
        format!("1000 graphons, max (r_WW - r_W) = {worst:.3e}"),
    )
}

fn random_graph(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|_| rng.random_bool(0.5))
        .collect();
    Graph::new(n, edges).unwrap()
}

fn c5_lipschitz() -> Verdict {
    let mut rng = Seed(505).rng();
    let mut worst = f64::INFINITY;
    for _ in 0..1000 {
        let k = rng.random_range(1..=6);
        let w = random_graphon(k, &mut rng);
        let f = random_graph(rng.random_range(1..=4), &mut rng);
        let mut s: Vec<usize> = Vec::new();
        for v in 0..f.n() {
            if rng.random_bool(0.6) && s.iter().all(|&u| !f.has_edge(u, v)) {
                s.push(v);
            }
        }
        let x: Vec<usize> = s.iter().map(|_| rng.random_range(0..k)).collect();
        let y: Vec<usize> = s.iter().map(|_| rng.random_range(0..k)).collect();
        let ax = StepAssignment::new(s.iter().copied().zip(x.iter().copied())).unwrap();
        let ay = StepAssignment::new(s.iter().copied().zip(y.iter().copied())).unwrap();
        let r = neighborhood_metric(&w);
        let lip = x
            .iter()
            .zip(&y)
            .map(|(&a, &b)| r.get(a, b))
            .fold(0.0, f64::max);
        let tx = partial_density(&f, &s, &ax, &w, false).unwrap();
        let ty = partial_density(&f, &s, &ay, &w, false).unwrap();
        worst = worst.min(f.edge_count() as f64 * lip - (tx - ty).abs());
    }
    for _ in 0..1000 {
        let (k1, k2) = (rng.random_range(1..=5), rng.random_range(1..=5));
        let rows: Vec<Vec<f64>> = (0..k1)
            .map(|_| (0..k2).map(|_| rng.random::<f64>()).collect())
            .collect();
        let w = StepBigraphon::new(
            random_measure(k1, &mut rng),
            random_measure(k2, &mut rng),
            rows,
        )
        .unwrap();
        let (n1, n2) = (rng.random_range(1..=2), rng.random_range(1..=2));
        let edges: Vec<(usize, usize)> = (0..n1)
            .flat_map(|u| (0..n2).map(move |v| (u, v)))
            .filter(|_| rng.random_bool(0.5))
            .collect();
        let f = Bigraph::new(n1, n2, edges).unwrap();
        let s1: Vec<usize> = (0..n1).filter(|_| rng.random_bool(0.6)).collect();
        let s2: Vec<usize> = (0..n2)
            .filter(|&v| s1.iter().all(|&u| !f.has_edge(u, v)))
            .filter(|_| rng.random_bool(0.6))
            .collect();
        let x: Vec<(usize, usize)> = s1.iter().map(|&u| (u, rng.random_range(0..k1))).collect();
        let x2: Vec<(usize, usize)> = s1.iter().map(|&u| (u, rng.random_range(0..k1))).collect();
        let y: Vec<(usize, usize)> = s2.iter().map(|&v| (v, rng.random_range(0..k2))).collect();
        let y2: Vec<(usize, usize)> = s2.iter().map(|&v| (v, rng.random_range(0..k2))).collect();
        let (r1, r2) = bigraphon_metrics(&w);
        let lip = x
            .iter()
            .zip(&x2)
            .map(|(a, b)| r1.get(a.1, b.1))
            .chain(y.iter().zip(&y2).map(|(a, b)| r2.get(a.1, b.1)))
            .fold(0.0, f64::max);
        let t = |x: &[(usize, usize)], y: &[(usize, usize)]| {
            let ax = StepAssignment::new(x.iter().copied()).unwrap();
            let ay = StepAssignment::new(y.iter().copied()).unwrap();
            partial_bigraph_density(&f, &s1, &s2, &ax, &ay, &w, false).unwrap()
        };
        worst = worst.min(f.edge_count() as f64 * lip - (t(&x, &y) - t(&x2, &y2)).abs());
    }
    check(
        worst >= -1e-9,
        format!("1000 graph + 1000 bigraph triples, min slack = {worst:.3e}"),
    )
}

fn c6_ultra_strong() -> Verdict {
    let mut rng = Seed(606).rng();
    let mut worst_l1 = f64::NEG_INFINITY;
    let mut worst_classes = f64::NEG_INFINITY;
    for _ in 0..100 {
        let k = rng.random_range(1..=10);
        let w = random_graphon(k, &mut rng);
        for eps in [0.2, 0.3] {
            let u = ultra_strong_partition(&w, eps).map_err(|e| e.to_string())?;
            let wp = &u.stepfunction;
            let mu = w.mu();
            let l1: f64 = (0..k)
                .flat_map(|i| (0..k).map(move |j| (i, j)))
                .map(|(i, j)| mu[i] * mu[j] * (w.get(i, j) - wp.get(i, j)).abs())
                .sum();
            let bins = (1.0 / eps).ceil();
            let bound = u.m as f64 * bins.powi(u.m as i32);
            worst_l1 = worst_l1.max(l1 - eps);
            worst_classes = worst_classes.max(u.report.partition.class_count() as f64 - bound);
        }
    }
    check(
        worst_l1 <= 0.0 && worst_classes <= 0.0,
        format!(
            "200 runs, max (l1 - eps) = {worst_l1:.3e}, max (classes - bound) = {worst_classes}"
        ),
    )
}

fn family_masks(h: &SetFamily) -> Vec<u32> {
    h.sets()
        .iter()
        .map(|s| s.iter().fold(0u32, |m, &x| m | 1 << x))
        .collect()
}

/// VC dimension by checking every subset of the ground set.
fn brute_vc(m: usize, masks: &[u32]) -> Option<usize> {
    if masks.is_empty() {
        return None;
    }
    let mut best = 0;
    for s in 0u32..1 << m {
        let traces: std::collections::HashSet<u32> = masks.iter().map(|&a| a & s).collect();
        if traces.len() == 1 << s.count_ones() {
            best = best.max(s.count_ones() as usize);
        }
    }
    Some(best)
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

fn set_corpus() -> Vec<SetFamily> {
    let mut out = Vec::new();
    for m in 0..=3usize {
        for bits in 0u64..1 << (1 << m) {
            let sets: Vec<Vec<usize>> = (0..1usize << m)
                .filter(|s| bits >> s & 1 == 1)
                .map(|s| (0..m).filter(|&x| s >> x & 1 == 1).collect())
                .collect();
            out.push(SetFamily::new(m, &sets, None).unwrap());
        }
    }
    let mut rng = Seed(707).rng();
    for _ in 0..10_000 {
        let m = rng.random_range(1..=5);
        let count = rng.random_range(0..=(1usize << m));
        let sets: Vec<Vec<usize>> = (0..count)
            .map(|_| (0..m).filter(|_| rng.random_bool(0.5)).collect())
            .collect();
        out.push(SetFamily::new(m, &sets, None).unwrap());
    }
    out
}

fn c7_sauer_shelah(corpus: &[SetFamily]) -> Verdict {
    for h in corpus {
        let masks = family_masks(h);
        let vc = vc_dimension(h).map_err(|e| e.to_string())?;
        if vc != brute_vc(h.m(), &masks) {
            return Err(format!(
                "vc {vc:?} disagrees with brute force on {:?}",
                h.sets()
            ));
        }
        let Some(d) = vc else { continue };
        let bound: u64 = (0..=d.min(h.m())).map(|i| binomial(h.m(), i)).sum();
        if h.len() as u64 > bound {
            return Err(format!("|H| = {} > {bound} for {:?}", h.len(), h.sets()));
        }
    }
    Ok(format!("{} families", corpus.len()))
}

fn c8_sym_diff(corpus: &[SetFamily]) -> Verdict {
    let mut ratio = 0.0f64;
    for h in corpus {
        let Some(d) = vc_dimension(h).map_err(|e| e.to_string())? else {
            continue;
        };
        let masks = family_masks(h);
        let diffs: Vec<u32> = masks
            .iter()
            .flat_map(|&a| masks.iter().map(move |&b| a ^ b))
            .collect();
        let dd = brute_vc(h.m(), &diffs).unwrap();
        if vc_dimension(&sym_diff_family(h)).unwrap() != Some(dd) {
            return Err(format!("sym-diff vc disagrees on {:?}", h.sets()));
        }
        if dd > 10 * d {
            return Err(format!("vc(H△H) = {dd} > 10·{d}"));
        }
        if d > 0 {
            ratio = ratio.max(dd as f64 / d as f64);
        }
    }
    let prefixes: Vec<Vec<usize>> = (0..=4).map(|i| (0..i).collect()).collect();
    let h = SetFamily::new(4, &prefixes, None).unwrap();
    let pair = (
        vc_dimension(&h).unwrap(),
        vc_dimension(&sym_diff_family(&h)).unwrap(),
    );
    check(
        pair == (Some(1), Some(2)),
        format!("max observed ratio {ratio}, prefix family gives {pair:?}"),
    )
}

fn all_bigraphs(n1: usize, n2: usize) -> Vec<Bigraph> {
    let pairs: Vec<(usize, usize)> = (0..n1).flat_map(|u| (0..n2).map(move |v| (u, v))).collect();
    (0u32..1 << pairs.len())
        .map(|bits| {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(b, _)| bits >> b & 1 == 1)
                .map(|(_, &e)| e);
            Bigraph::new(n1, n2, edges).unwrap()
        })
        .collect()
}

/// Induced bigraph density by direct enumeration over all assignments.
fn brute_induced_bigraph(f: &Bigraph, w: &StepGraphon) -> f64 {
    let k = w.k();
    let mu = w.mu();
    let (n1, n2) = (f.n1(), f.n2());
    let total = (k as u64).pow((n1 + n2) as u32);
    let mut sum = 0.0;
    for code in 0..total {
        let mut c = code;
        let steps: Vec<usize> = (0..n1 + n2)
            .map(|_| {
                let s = (c % k as u64) as usize;
                c /= k as u64;
                s
            })
            .collect();
        let mut term: f64 = steps.iter().map(|&s| mu[s]).product();
        for u in 0..n1 {
            for v in 0..n2 {
                let x = w.get(steps[u], steps[n1 + v]);
                term *= if f.has_edge(u, v) { x } else { 1.0 - x };
            }
        }
        sum += term;
    }
    sum
}

fn c9_thinness() -> Verdict {
    for n in 2..=8 {
        let w = half_graphon(n).map_err(|e| e.to_string())?;
        let family = neighborhood_family(&w).unwrap().family;
        let d = de_dimension(&family).unwrap();
        let t = thinness_witness(&w, 2).map_err(|e| e.to_string())?;
        let Some(f) = t.witness else {
            return Err(format!("n = {n}: no witness"));
        };
        let density = brute_induced_bigraph(&f, &w);
        if d != 1 || t.de_dimension != 1 || density != 0.0 {
            return Err(format!("n = {n}: DE {d}, witness density {density}"));
        }
    }
    let patterns: Vec<Bigraph> = (1..=3)
        .flat_map(|n1| (1..=3).flat_map(move |n2| all_bigraphs(n1, n2)))
        .collect();
    let mut smallest = f64::INFINITY;
    for seed in 0..100u64 {
        let w = random_stepfunction(2 + seed as usize % 3, Seed(900 + seed), false).unwrap();
        let b = w.as_bigraphon();
        for f in &patterns {
            smallest = smallest.min(bigraph_density(f, &b, true).unwrap());
        }
    }
    // Harder family: 0-1 values except one entry in (0.01, 0.99). Here the
    // density can be far below 1e-12, so only strict positivity is checked.
    let mut rng = Seed(909).rng();
    let mut adversarial = f64::INFINITY;
    for _ in 0..100 {
        let k = rng.random_range(2..=4);
        let mut rows = random_symmetric(k, 0.0, 1.0, &mut rng);
        for row in rows.iter_mut() {
            for v in row.iter_mut() {
                *v = v.round();
            }
        }
        let (i, j) = (rng.random_range(0..k), rng.random_range(0..k));
        let v = rng.random_range(0.011..0.989);
        rows[i][j] = v;
        rows[j][i] = v;
        let w = StepGraphon::new(random_measure(k, &mut rng), rows).unwrap();
        let b = w.as_bigraphon();
        for f in &patterns {
            adversarial = adversarial.min(bigraph_density(f, &b, true).unwrap());
        }
    }
    check(
        smallest > 1e-12 && adversarial > 0.0,
        format!(
            "half graphs n = 2..8 have DE dimension 1 with excluded witness; \
             min t_ind over {} patterns × 100 random graphons = {smallest:.3e}, \
             single fuzzy entry = {adversarial:.3e}",
            patterns.len()
        ),
    )
}

fn c10_sphere() -> Verdict {
    let n = 2000;
    let s = sphere_graphon(2, n, Seed(1010)).map_err(|e| e.to_string())?;
    let w = &s.graphon;
    let mu = w.mu();
    let mut rng = Seed(1011).rng();
    let (mut dev_r, mut dev_sq) = (0.0f64, 0.0f64);
    for _ in 0..500 {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        let dot: f64 = s.points[a]
            .iter()
            .zip(&s.points[b])
            .map(|(x, y)| x * y)
            .sum();
        let angle = dot.clamp(-1.0, 1.0).acos() / std::f64::consts::PI;
        let r: f64 = (0..n)
            .map(|z| mu[z] * (w.get(a, z) - w.get(b, z)).abs())
            .sum();
        let sq: f64 = (0..n).map(|z| mu[z] * w.get(a, z) * w.get(z, b)).sum();
        dev_r = dev_r.max((r - angle).abs());
        dev_sq = dev_sq.max((1.0 - 2.0 * sq - angle).abs());
    }
    let tol = 3.0 / (n as f64).sqrt();
    check(
        dev_r <= tol && dev_sq <= tol,
        format!("max deviations {dev_r:.4} and {dev_sq:.4}, tolerance {tol:.4}"),
    )
}

/// Runs the CLI twice with `-o` pointing at two files; returns the exit
/// code and the output bytes after checking that both runs agree.
fn run_twice(dir: &Path, name: &str, args: &[&str]) -> Result<(i32, Vec<u8>), String> {
    let mut outputs = Vec::new();
    let mut codes = Vec::new();
    for round in 0..2 {
        let out = dir.join(format!("{name}.{round}"));
        let status = Command::new(env!("CARGO_BIN_EXE_graphon"))
            .args(args)
            .arg("-o")
            .arg(&out)
            .current_dir(dir)
            .output()
            .map_err(|e| e.to_string())?;
        codes.push(status.status.code().unwrap_or(-1));
        outputs.push(fs::read(&out).unwrap_or_default());
    }
    if codes[0] != codes[1] || outputs[0] != outputs[1] {
        return Err(format!("{name}: runs differ"));
    }
    Ok((codes[0], outputs.swap_remove(0)))
}

fn half_graph_text(n: usize) -> String {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i + j < n)
        .collect();
    let mut text = format!("{n} {}\n", edges.len());
    for (u, v) in edges {
        text.push_str(&format!("{u} {v}\n"));
    }
    text
}

fn edge_set(text: &str) -> std::collections::BTreeSet<(usize, usize)> {
    text.lines()
        .skip(1)
        .filter_map(|l| {
            let mut it = l.split_whitespace().map(|x| x.parse::<usize>().unwrap());
            Some((it.next()?, it.next()?))
        })
        .map(|(u, v)| (u.min(v), u.max(v)))
        .collect()
}

fn c11_edit_bound(dir: &Path) -> Verdict {
    let input = half_graph_text(8);
    fs::write(dir.join("half8.graph"), &input).unwrap();
    fs::write(dir.join("2matching.bigraph"), "2 2 2\n0 0\n1 1\n").unwrap();
    let mut blowups = Vec::new();
    let mut code = 0;
    for round in 0..2 {
        let out = format!("blowup.{round}.graph");
        let (c, _) = run_twice(
            dir,
            &format!("edit{round}"),
            &[
                "partition",
                "thin",
                "--graph",
                "half8.graph",
                "--pattern",
                "2matching.bigraph",
                "--eps",
                "0.5",
                "--blowup-out",
                &out,
            ],
        )?;
        code = c;
        blowups.push(fs::read_to_string(dir.join(&out)).unwrap_or_default());
    }
    if blowups[0] != blowups[1] {
        return Err("blow-up files differ between runs".into());
    }
    let edits = edge_set(&input)
        .symmetric_difference(&edge_set(&blowups[0]))
        .count();
    check(
        code == 0 && edits as f64 <= 0.5 * 64.0,
        format!("exit {code}, {edits} edited pairs, bound 32"),
    )
}

fn c12_determinism(dir: &Path) -> Verdict {
    fs::write(dir.join("k3.graph"), "3 3\n0 1\n1 2\n0 2\n").unwrap();
    fs::write(
        dir.join("prefixes.json"),
        "{\"m\":3,\"weights\":null,\"sets\":[[],[0],[0,1],[0,1,2]]}",
    )
    .unwrap();
    let runs: &[(&str, &[&str])] = &[
        ("zoo_random", &["zoo", "random", "--k", "9", "--seed", "5"]),
        ("zoo_half", &["zoo", "half", "--n", "8"]),
        (
            "zoo_sphere",
            &["zoo", "sphere", "--n", "300", "--seed", "2"],
        ),
        (
            "density",
            &["density", "--constant", "0.5", "--pattern", "k3.graph"],
        ),
        ("vc", &["vc", "--family", "prefixes.json"]),
    ];
    for (name, args) in runs {
        let (code, _) = run_twice(dir, name, args)?;
        if code != 0 {
            return Err(format!("{name}: exit {code}"));
        }
    }
    fs::copy(dir.join("zoo_random.0"), dir.join("r.graphon")).unwrap();
    fs::copy(dir.join("zoo_half.0"), dir.join("h.graphon")).unwrap();
    let follow: &[(&str, &[&str])] = &[
        (
            "weak",
            &["partition", "weak", "--eps-net", "0.05", "r.graphon"],
        ),
        (
            "ultra",
            &["partition", "ultra", "--eps", "0.3", "r.graphon"],
        ),
        (
            "thin",
            &[
                "partition",
                "thin",
                "--pattern",
                "2matching.bigraph",
                "--eps",
                "0.25",
                "h.graphon",
            ],
        ),
        ("metrics", &["metrics", "--similarity", "r.graphon"]),
        ("thinness", &["thinness", "--kmax", "2", "h.graphon"]),
        ("report", &["report", "r.graphon"]),
    ];
    for (name, args) in follow {
        let (code, _) = run_twice(dir, name, args)?;
        if code != 0 {
            return Err(format!("{name}: exit {code}"));
        }
    }
    Ok(format!(
        "{} commands plus the edit run, byte-identical across two runs",
        runs.len() + follow.len()
    ))
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temporary directory");
    let graphons = corpus();
    let families = set_corpus();
    let criteria: Vec<Criterion> = vec![
        ("cut-norm oracle", Box::new(c1_cut_norm_oracle)),
        (
            "weak partition via net",
            Box::new(|| c2_weak_partition(&graphons)),
        ),
        (
            "net from partition",
            Box::new(|| c3_net_from_partition(&graphons)),
        ),
        ("metric contraction", Box::new(c4_contraction)),
        ("Lipschitz bound", Box::new(c5_lipschitz)),
        ("ultra-strong partition", Box::new(c6_ultra_strong)),
        ("Sauer-Shelah", Box::new(|| c7_sauer_shelah(&families))),
        (
            "symmetric-difference VC",
            Box::new(|| c8_sym_diff(&families)),
        ),
        ("thinness pipeline", Box::new(c9_thinness)),
        ("sphere graphon", Box::new(c10_sphere)),
        (
            "edit blow-up bound",
            Box::new(|| c11_edit_bound(dir.path())),
        ),
        ("CLI determinism", Box::new(|| c12_determinism(dir.path()))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
