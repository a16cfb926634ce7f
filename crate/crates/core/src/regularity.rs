//! Regularity partitions and their error functionals.

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::densities::bigraph_density;
use crate::error::{Error, Result};
use crate::graph::{blow_up, Bigraph, Graph};
use crate::kernel::{graphon_from_graph, StepGraphon};
use crate::metrics::{average_net, neighborhood_distance, similarity_metric, voronoi_partition};
use crate::norms::{cut_norm_auto, exact_one_sided, l1_norm, CutNormValue};
use crate::partition::{aggregate, block_averages, refine, Partition};
use crate::setsystems::sauer_shelah_bound;

/// Largest step count for the exact Szemerédi error.
pub const SZEMEREDI_MAX_STEPS: usize = 20;
/// Largest number of classes an ultra-strong partition may have.
pub const MAX_ULTRA_CLASSES: usize = 1_000_000;
/// Slack allowed when checking certified bounds.
pub const BOUND_TOL: f64 = 1e-9;

/// A partition together with its measured and certified errors.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionReport {
    pub partition: Partition,
    pub centers: Option<Vec<usize>>,
    /// `‖W - W_P‖_□`; a lower bound unless `exact`.
    pub cut_error: f64,
    pub l1_error: f64,
    pub szemeredi_error: Option<f64>,
    pub net_cost: Option<f64>,
    pub certified_bound: Option<f64>,
    pub exact: bool,
}

impl PartitionReport {
    /// Measures every error of `p` on `w`.
    pub fn measure(w: &StepGraphon, p: Partition) -> Result<Self> {
        let cut = partition_cut_error(w, &p)?;
        let r = w.difference(&aggregate(w, &p)?)?;
        let szemeredi_error = if w.k() <= SZEMEREDI_MAX_STEPS {
            Some(szemeredi_error(w, &p)?)
        } else {
            None
        };
        Ok(PartitionReport {
            partition: p,
            centers: None,
            cut_error: cut.value,
            l1_error: l1_norm(&r),
            szemeredi_error,
            net_cost: None,
            certified_bound: None,
            exact: cut.exact,
        })
    }
}

impl Serialize for PartitionReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("PartitionReport", 8)?;
        s.serialize_field("classes", &self.partition.classes())?;
        s.serialize_field("centers", &self.centers)?;
        s.serialize_field("cut_error", &self.cut_error)?;
        s.serialize_field("l1_error", &self.l1_error)?;
        s.serialize_field("szemeredi_error", &self.szemeredi_error)?;
        s.serialize_field("net_cost", &self.net_cost)?;
        s.serialize_field("certified_bound", &self.certified_bound)?;
        s.serialize_field("exact", &self.exact)?;
        s.end()
    }
}

fn check_bound(what: &str, value: f64, bound: f64) -> Result<()> {
    if value <= bound + BOUND_TOL {
        Ok(())
    } else {
        Err(Error::BoundViolated(format!(
            "{what} {value} exceeds {bound}"
        )))
    }
}

/// `‖W - W_P‖_□`, exact for at most 24 steps.
pub fn partition_cut_error(w: &StepGraphon, p: &Partition) -> Result<CutNormValue> {
    let r = w.difference(&aggregate(w, p)?)?;
    Ok(cut_norm_auto(&r))
}

/// Supremum of `|⟨W - W_P, H⟩|` over 0-1 functions `H` supported on one
/// product set inside each ordered pair of classes.
///
/// The positive and negative parts are maximized independently in every
/// block (an empty product set is allowed), so the supremum is the larger
/// of the two block sums.
pub fn szemeredi_error(w: &StepGraphon, p: &Partition) -> Result<f64> {
    if w.k() > SZEMEREDI_MAX_STEPS {
        return Err(Error::SizeLimit {
            what: "step count for Szemerédi error",
            got: w.k(),
            limit: SZEMEREDI_MAX_STEPS,
        });
    }
    let agg = aggregate(w, p)?;
    let mu = w.mu();
    let classes = p.classes();
    let (mut pos, mut neg) = (0.0, 0.0);
    for a in &classes {
        for b in &classes {
            let block: Vec<f64> = a
                .iter()
                .flat_map(|&i| b.iter().map(move |&j| (i, j)))
                .map(|(i, j)| mu[i] * mu[j] * (w.get(i, j) - agg.get(i, j)))
                .collect();
            let (bp, bn) = exact_one_sided(&block, a.len(), b.len());
            pos += bp;
            neg += bn;
        }
    }
    Ok(f64::max(pos, neg))
}

/// Voronoi cells of a greedy average net in the similarity metric, with
/// the certified cut error `8·sqrt(net cost)`.
pub fn weak_partition_via_net(w: &StepGraphon, eps_net: f64) -> Result<PartitionReport> {
    if !(eps_net > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "eps must be positive, got {eps_net}"
        )));
    }
    let m = similarity_metric(w);
    let net = average_net(&m, eps_net)?;
    let p = voronoi_partition(&m, &net.centers)?;
    let mut report = PartitionReport::measure(w, p)?;
    let bound = 8.0 * net.cost.sqrt();
    check_bound("cut error", report.cut_error, bound)?;
    report.centers = Some(net.centers);
    report.net_cost = Some(net.cost);
    report.certified_bound = Some(bound);
    Ok(report)
}

/// `F(x) = Σ_z mu_z |Σ_s mu_s R(x, s) w(s, z)|` with `R = W - W_P`.
pub fn below_average_functional(w: &StepGraphon, p: &Partition) -> Result<Vec<f64>> {
    let r = w.difference(&aggregate(w, p)?)?;
    let mu = w.mu();
    let k = w.k();
    Ok((0..k)
        .map(|x| {
            (0..k)
                .map(|z| {
                    let inner: f64 = (0..k).map(|s| mu[s] * r.get(x, s) * w.get(s, z)).sum();
                    mu[z] * inner.abs()
                })
                .sum()
        })
        .collect())
}

/// Centers read off a partition and the resulting average distance.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionNet {
    pub centers: Vec<usize>,
    pub net_cost: f64,
    pub cut_error: CutNormValue,
    /// `4 · cut_error`.
    pub certified_bound: f64,
}

/// Picks in every class the step minimizing [`below_average_functional`]
/// and measures the average similarity distance to these centers, which is
/// at most four times the cut error of `p`.
pub fn net_from_partition(w: &StepGraphon, p: &Partition) -> Result<PartitionNet> {
    let f = below_average_functional(w, p)?;
    let centers: Vec<usize> = p
        .classes()
        .iter()
        .map(|class| {
            class
                .iter()
                .copied()
                .fold(class[0], |best, s| if f[s] < f[best] { s } else { best })
        })
        .collect();
    let net_cost = similarity_metric(w).average_distance(&centers);
    let cut_error = partition_cut_error(w, p)?;
    let certified_bound = 4.0 * cut_error.value;
    if cut_error.exact {
        check_bound("net cost", net_cost, certified_bound)?;
    }
    Ok(PartitionNet {
        centers,
        net_cost,
        cut_error,
        certified_bound,
    })
}

/// Greedy centers in the neighborhood metric: a step becomes a center when
/// it is farther than `radius` from every earlier center. Returns the
/// centers and each step's nearest center (as an index into the centers,
/// ties to the earliest).
fn ball_cover(w: &StepGraphon, radius: f64) -> (Vec<usize>, Vec<usize>) {
    let k = w.k();
    let mut centers: Vec<usize> = Vec::new();
    for s in 0..k {
        if centers
            .iter()
            .all(|&c| neighborhood_distance(w, s, c) > radius)
        {
            centers.push(s);
        }
    }
    let cell = (0..k)
        .map(|s| {
            let mut best = 0;
            let mut best_d = neighborhood_distance(w, s, centers[0]);
            for (idx, &c) in centers.iter().enumerate().skip(1) {
                let d = neighborhood_distance(w, s, c);
                if d < best_d {
                    best = idx;
                    best_d = d;
                }
            }
            best
        })
        .collect();
    (centers, cell)
}

/// An ultra-strong partition with its aggregated stepfunction.
#[derive(Debug, Clone, PartialEq)]
pub struct UltraReport {
    pub report: PartitionReport,
    /// `W_P` on the original steps.
    pub stepfunction: StepGraphon,
    /// Number of ball centers.
    pub m: usize,
    /// `m · ⌈1/eps⌉^m`.
    pub class_bound: f64,
}

/// Covers the steps by balls of radius `eps/4` in `r_W`, then splits the
/// steps by the value bins (width `eps`) of every center row. On each
/// block the center row varies by at most `eps`, which gives
/// `‖W - W_P‖_1 <= 2·eps/4 + eps/2 = eps`.
pub fn ultra_strong_partition(w: &StepGraphon, eps: f64) -> Result<UltraReport> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "eps must lie in (0, 1), got {eps}"
        )));
    }
    let k = w.k();
    let (centers, cell) = ball_cover(w, eps / 4.0);
    let bins = (1.0 / eps).ceil();
    let bin_of = |v: f64| ((v / eps).floor().min(bins - 1.0)) as usize;
    let mut p = Partition::new(w.mu().to_vec(), cell)?;
    for &c in &centers {
        let labels: Vec<usize> = (0..k).map(|s| bin_of(w.get(c, s))).collect();
        p = refine(&p, &Partition::canonical(w.mu().to_vec(), &labels)?)?;
    }
    if p.class_count() > MAX_ULTRA_CLASSES {
        return Err(Error::SizeLimit {
            what: "ultra-strong class count",
            got: p.class_count(),
            limit: MAX_ULTRA_CLASSES,
        });
    }
    let m = centers.len();
    let class_bound = m as f64 * bins.powi(m as i32);
    let stepfunction = aggregate(w, &p)?;
    let mut report = PartitionReport::measure(w, p)?;
    check_bound("L1 error", report.l1_error, eps)?;
    check_bound(
        "class count",
        report.partition.class_count() as f64,
        class_bound,
    )?;
    report.centers = Some(centers);
    report.certified_bound = Some(eps);
    Ok(UltraReport {
        report,
        stepfunction,
        m,
        class_bound,
    })
}

/// A thin-graphon partition with its atom count.
#[derive(Debug, Clone, PartialEq)]
pub struct ThinReport {
    pub report: PartitionReport,
    pub m: usize,
    /// Positive-measure atoms of the algebra generated by the center
    /// supports.
    pub atoms: usize,
    /// `Σ_{i < |V(F)|} C(m, i)`.
    pub atom_bound: u128,
}

/// Checks `t_ind(f, w) = 0` for `w` read as a bigraphon, then builds the
/// thin partition.
pub fn thin_ultra_partition(w: &StepGraphon, f: &Bigraph, eps: f64) -> Result<ThinReport> {
    w.require_zero_one()?;
    let t = bigraph_density(f, &w.as_bigraphon(), true)?;
    if t > 0.0 {
        return Err(Error::ExclusionFails(t));
    }
    let thin = thin_partition(w, f.node_count(), eps)?;
    if thin.atoms as u128 > thin.atom_bound {
        return Err(Error::BoundViolated(format!(
            "{} atoms exceed the Sauer–Shelah bound {}",
            thin.atoms, thin.atom_bound
        )));
    }
    Ok(thin)
}

/// Ball cover of radius `eps/4` refined by the atoms of the center
/// supports. The center rows are constant on every block, so
/// `‖W - W_P‖_1 <= eps/2`.
fn thin_partition(w: &StepGraphon, pattern_nodes: usize, eps: f64) -> Result<ThinReport> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "eps must lie in (0, 1), got {eps}"
        )));
    }
    w.require_zero_one()?;
    let k = w.k();
    let (centers, cell) = ball_cover(w, eps / 4.0);
    let signature: Vec<Vec<bool>> = (0..k)
        .map(|s| centers.iter().map(|&c| w.get(c, s) == 1.0).collect())
        .collect();
    let mut distinct = signature.clone();
    distinct.sort();
    distinct.dedup();
    let atom_labels: Vec<usize> = signature
        .iter()
        .map(|sig| distinct.binary_search(sig).expect("signature is listed"))
        .collect();
    let atoms = Partition::canonical(w.mu().to_vec(), &atom_labels)?;
    let p = refine(&Partition::new(w.mu().to_vec(), cell)?, &atoms)?;
    let m = centers.len();
    let mut report = PartitionReport::measure(w, p)?;
    check_bound("L1 error", report.l1_error, eps / 2.0)?;
    report.centers = Some(centers);
    report.certified_bound = Some(eps / 2.0);
    Ok(ThinReport {
        report,
        m,
        atoms: atoms.class_count(),
        atom_bound: sauer_shelah_bound(m as u64, pattern_nodes.saturating_sub(1) as u64),
    })
}

/// A repartition into classes of nearly equal measure.
#[derive(Debug, Clone, PartialEq)]
pub struct Equalized {
    pub graphon: StepGraphon,
    pub partition: Partition,
    /// For each new step, the step of the input it came from.
    pub origin: Vec<usize>,
    pub cut_before: CutNormValue,
    pub cut_after: CutNormValue,
}

/// Refines `p` by cutting classes into equal pieces, splitting steps where
/// a cut falls inside one. The class with the largest pieces is cut
/// further while the spread of class measures exceeds `1/⌈c/eps⌉` and the
/// class count stays within `c·⌈1/eps⌉`. Since the result refines `p`, its
/// cut error is at most twice the original.
pub fn equalize(w: &StepGraphon, p: &Partition, eps: f64) -> Result<Equalized> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "eps must lie in (0, 1), got {eps}"
        )));
    }
    p.check_basis(w)?;
    let c = p.class_count();
    let tolerance = 1.0 / (c as f64 / eps).ceil();
    let budget = c * (1.0 / eps).ceil() as usize;
    let measures = p.class_measures();
    let mut pieces = vec![1usize; c];
    let spread = |pieces: &[usize]| {
        let sizes = measures.iter().zip(pieces).map(|(m, &n)| m / n as f64);
        let (lo, hi) = sizes.fold((f64::INFINITY, 0.0f64), |(lo, hi), s| {
            (lo.min(s), hi.max(s))
        });
        hi - lo
    };
    while spread(&pieces) > tolerance && pieces.iter().sum::<usize>() < budget {
        let widest = (0..c)
            .max_by(|&a, &b| {
                let (sa, sb) = (
                    measures[a] / pieces[a] as f64,
                    measures[b] / pieces[b] as f64,
                );
                sa.partial_cmp(&sb).unwrap().then(b.cmp(&a))
            })
            .expect("at least one class");
        pieces[widest] += 1;
    }

    // Lay each class out along a line and cut it at multiples of its
    // piece size.
    let mu = w.mu();
    let mut plan: Vec<Vec<f64>> = vec![Vec::new(); w.k()];
    let mut piece_of: Vec<Vec<usize>> = vec![Vec::new(); w.k()];
    let mut first_label = 0;
    for (a, class) in p.classes().iter().enumerate() {
        let n = pieces[a];
        let size = measures[a] / n as f64;
        let mut pos = 0.0;
        for &s in class {
            let (start, end) = (pos, pos + mu[s]);
            pos = end;
            let tol = 1e-12 * measures[a];
            let mut points = vec![start];
            points.extend(
                (1..n)
                    .map(|j| j as f64 * size)
                    .filter(|&b| b > start + tol && b < end - tol),
            );
            points.push(end);
            let mut fractions = Vec::new();
            let mut labels = Vec::new();
            for seg in points.windows(2) {
                let mid = 0.5 * (seg[0] + seg[1]);
                fractions.push((seg[1] - seg[0]) / mu[s]);
                labels.push(first_label + ((mid / size).floor() as usize).min(n - 1));
            }
            let total: f64 = fractions.iter().sum();
            fractions.iter_mut().for_each(|f| *f /= total);
            plan[s] = fractions;
            piece_of[s] = labels;
        }
        first_label += n;
    }
    let (graphon, origin) = w.split_steps(&plan)?;
    let labels: Vec<usize> = piece_of.into_iter().flatten().collect();
    let partition = Partition::canonical(graphon.mu().to_vec(), &labels)?;

    let cut_before = partition_cut_error(w, p)?;
    let cut_after = partition_cut_error(&graphon, &partition)?;
    if cut_before.exact && cut_after.exact {
        check_bound(
            "equalized cut error",
            cut_after.value,
            2.0 * cut_before.value,
        )?;
    }
    Ok(Equalized {
        graphon,
        partition,
        origin,
        cut_before,
        cut_after,
    })
}

/// True when `f` occurs in `g` as an induced sub-bigraph on two disjoint
/// node sets, with distinct nodes for distinct pattern nodes.
pub fn contains_induced_bigraph(g: &Graph, f: &Bigraph) -> bool {
    let (n1, n2) = (f.n1(), f.n2());
    if n1 + n2 > g.n() {
        return false;
    }
    // Alternate the two sides so constraints appear early.
    let mut order = Vec::with_capacity(n1 + n2);
    for i in 0..n1.max(n2) {
        if i < n1 {
            order.push((0u8, i));
        }
        if i < n2 {
            order.push((1u8, i));
        }
    }
    let adj = g.adjacency();
    let mut image = vec![usize::MAX; n1 + n2];
    let mut used = vec![false; g.n()];

    fn extend(
        depth: usize,
        order: &[(u8, usize)],
        f: &Bigraph,
        adj: &[Vec<bool>],
        image: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let Some(&(side, node)) = order.get(depth) else {
            return true;
        };
        let n1 = f.n1();
        for x in 0..adj.len() {
            if used[x] {
                continue;
            }
            let consistent = order[..depth].iter().all(|&(s, other)| {
                if s == side {
                    return true;
                }
                let (u, v) = if side == 0 {
                    (node, other)
                } else {
                    (other, node)
                };
                let y = if s == 0 {
                    image[other]
                } else {
                    image[n1 + other]
                };
                adj[x][y] == f.has_edge(u, v)
            });
            if !consistent {
                continue;
            }
            let slot = if side == 0 { node } else { n1 + node };
            image[slot] = x;
            used[x] = true;
            if extend(depth + 1, order, f, adj, image, used) {
                return true;
            }
            used[x] = false;
        }
        false
    }

    extend(0, &order, f, &adj, &mut image, &mut used)
}

/// A graph close to `g` in edit distance that is a blow-up of a small
/// graph.
#[derive(Debug, Clone, PartialEq)]
pub struct EditApprox {
    /// The edited graph on the nodes of `g`.
    pub graph: Graph,
    pub edits: usize,
    /// One node per class.
    pub base: Graph,
    pub sizes: Vec<usize>,
    pub internal: Vec<bool>,
    /// Class of each node of `g`.
    pub classes: Vec<usize>,
    pub thin: ThinReport,
    /// `eps · n^2`.
    pub edit_bound: f64,
}

/// Excludes `f` from `g` combinatorially, builds the thin partition of the
/// graphon of `g`, rounds each block average to 0 or 1 (ties to 0) and
/// realizes the rounded stepfunction as a blow-up.
///
/// The thin partition has `‖W - W_P‖_1 <= eps/2`, rounding at most doubles
/// the distance, and each edited pair is counted twice in the L1 norm, so
/// at most `eps·n²/2` pairs change.
pub fn edit_blowup_approx(g: &Graph, f: &Bigraph, eps: f64) -> Result<EditApprox> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    if contains_induced_bigraph(g, f) {
        return Err(Error::ExclusionFails(1.0));
    }
    let w = graphon_from_graph(g)?;
    let thin = thin_partition(&w, f.node_count(), eps)?;
    let p = &thin.report.partition;
    let n = g.n();
    let c = p.class_count();
    let avg = block_averages(&w, p);
    let sizes: Vec<usize> = p.classes().iter().map(Vec::len).collect();
    for (a, &size) in sizes.iter().enumerate() {
        let measure = p.class_measures()[a];
        if (measure * n as f64 - size as f64).abs() > 1e-9 {
            return Err(Error::NotRealizable(format!(
                "class {a} has measure {measure}"
            )));
        }
    }
    let rounded = |a: usize, b: usize| avg[a * c + b] > 0.5;
    let internal: Vec<bool> = (0..c).map(|a| rounded(a, a)).collect();
    let base_edges = (0..c).flat_map(|a| (a + 1..c).map(move |b| (a, b)));
    let base = Graph::new(c, base_edges.filter(|&(a, b)| rounded(a, b)))?;
    let classes: Vec<usize> = p.assignment().to_vec();
    let mut edges = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            let (a, b) = (classes[x], classes[y]);
            if rounded(a, b) {
                edges.push((x, y));
            }
        }
    }
    let graph = Graph::new(n, edges)?;

    // The blow-up numbers nodes class by class; relabel and compare.
    let expanded = blow_up(&base, &sizes, &internal)?;
    let mut position = vec![0; n];
    let mut next = 0;
    for class in p.classes() {
        for x in class {
            position[x] = next;
            next += 1;
        }
    }
    let relabeled = Graph::new(n, graph.edges().map(|(x, y)| (position[x], position[y])))?;
    if relabeled != expanded {
        return Err(Error::NotRealizable(
            "edited graph is not the blow-up".into(),
        ));
    }

    let edits = g.edit_distance(&graph)?;
    let edit_bound = eps * (n * n) as f64;
    check_bound("edit count", edits as f64, eps * (n * n) as f64 / 2.0)?;
    Ok(EditApprox {
        graph,
        edits,
        base,
        sizes,
        internal,
        classes,
        thin,
        edit_bound,
    })
}
