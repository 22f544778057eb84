//! Tie-aware ROC curves and the quantities derived from them.
//!
//! Segments are swept from the highest risk score down. Segments sharing a
//! risk score form one tie group and produce a single vertex, so tied scores
//! give a sloped segment instead of an arbitrary staircase (the "expected
//! performance" treatment of ties). Flagging is inclusive: a vertex with
//! threshold `t` flags every segment whose risk score is `>= t`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::{rates, ConfusionCounts, Dataset, Orientation};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocVertex {
    pub fpr: f64,
    pub tpr: f64,
    /// Canonical risk threshold; `+inf` for the origin vertex.
    pub threshold: f64,
    pub counts: ConfusionCounts,
}

impl RocVertex {
    /// Threshold on the QE system's own score scale.
    pub fn raw_threshold(&self, orientation: Orientation) -> f64 {
        orientation.to_raw(self.threshold)
    }
}

/// A ROC curve: the origin `(0, 0)` followed by one vertex per distinct risk
/// score, ending at `(1, 1)` once every segment is flagged.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    vertices: Vec<RocVertex>,
    p_count: usize,
    n_count: usize,
    orientation: Orientation,
    fingerprint: String,
}

/// Sorts `(risk, is_positive)` pairs worst first and collapses tie groups.
/// Returns one `(threshold, tp, fp)` triple per group, cumulative.
fn tie_groups(mut scored: Vec<(f64, bool)>) -> Vec<(f64, usize, usize)> {
    scored.sort_unstable_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal));
    let mut groups: Vec<(f64, usize, usize)> = Vec::new();
    let (mut tp, mut fp) = (0, 0);
    for (i, &(risk, positive)) in scored.iter().enumerate() {
        if positive {
            tp += 1;
        } else {
            fp += 1;
        }
        let group_ends = scored.get(i + 1).is_none_or(|next| next.0 != risk);
        if group_ends {
            groups.push((risk, tp, fp));
        }
    }
    groups
}

pub fn build_roc(dataset: &Dataset) -> Result<RocCurve> {
    dataset.require_both_classes()?;
    let scored = dataset
        .segments()
        .iter()
        .map(|s| (s.risk_score, s.label.is_positive()))
        .collect();
    Ok(RocCurve {
        vertices: vertices_from_scored(scored, dataset.p_count(), dataset.n_count()),
        p_count: dataset.p_count(),
        n_count: dataset.n_count(),
        orientation: dataset.orientation(),
        fingerprint: dataset.fingerprint(),
    })
}

/// Curve vertices for `(risk, is_positive)` pairs with `p` positives and
/// `n` negatives, both non-zero.
pub(crate) fn vertices_from_scored(scored: Vec<(f64, bool)>, p: usize, n: usize) -> Vec<RocVertex> {
    let vertex = |threshold: f64, tp: usize, fp: usize| {
        let counts = ConfusionCounts::new(tp, p - tp, fp, n - fp);
        // Both classes are non-empty, so rates cannot fail.
        let r = rates(&counts).expect("non-degenerate counts");
        RocVertex {
            fpr: r.fpr,
            tpr: r.tpr,
            threshold,
            counts,
        }
    };
    let mut vertices = vec![vertex(f64::INFINITY, 0, 0)];
    vertices.extend(
        tie_groups(scored)
            .into_iter()
            .map(|(risk, tp, fp)| vertex(risk, tp, fp)),
    );
    vertices
}

impl RocCurve {
    pub fn vertices(&self) -> &[RocVertex] {
        &self.vertices
    }

    pub fn p_count(&self) -> usize {
        self.p_count
    }

    pub fn n_count(&self) -> usize {
        self.n_count
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Ground-truth fingerprint of the dataset the curve was built from.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    /// TPR at an arbitrary FPR by linear interpolation between vertices.
    /// Where the curve is vertical the highest TPR at that FPR is used.
    pub fn tpr_at(&self, fpr: f64) -> f64 {
        interpolate(&self.vertices, fpr, |v| (v.fpr, v.tpr))
    }

    pub fn tpr_on_grid(&self, grid: &[f64]) -> Vec<f64> {
        grid.iter().map(|&x| self.tpr_at(x)).collect()
    }

    /// The vertex in force at a canonical threshold: the one flagging
    /// exactly the segments whose risk score is `>= threshold`.
    pub fn vertex_at(&self, threshold: f64) -> &RocVertex {
        let idx = self.vertices.partition_point(|v| v.threshold >= threshold);
        // The origin vertex (threshold +inf) always satisfies the predicate.
        &self.vertices[idx.max(1) - 1]
    }
}

/// Interpolates a piecewise-linear curve with non-decreasing x at `x`.
pub(crate) fn interpolate<T>(points: &[T], x: f64, xy: impl Fn(&T) -> (f64, f64)) -> f64 {
    let idx = points.partition_point(|p| xy(p).0 <= x);
    if idx == 0 {
        return points.first().map_or(0.0, |p| xy(p).1);
    }
    let (x0, y0) = xy(&points[idx - 1]);
    match points.get(idx).map(&xy) {
        Some((x1, y1)) if x > x0 => y0 + (y1 - y0) * (x - x0) / (x1 - x0),
        _ => y0,
    }
}

fn trapezoid_sum<I>(points: I) -> f64
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let mut it = points.into_iter();
    let Some(mut prev) = it.next() else {
        return 0.0;
    };
    let mut area = 0.0;
    for p in it {
        area += (p.0 - prev.0) * (prev.1 + p.1) / 2.0;
        prev = p;
    }
    area
}

/// Trapezoidal area under the curve.
pub fn auc(curve: &RocCurve) -> f64 {
    vertices_auc(&curve.vertices)
}

/// The trapezoid sum evaluated on integer counts, with a single division at
/// the end, so that e.g. a perfectly separating curve scores exactly 1.
pub(crate) fn vertices_auc(vertices: &[RocVertex]) -> f64 {
    let Some(last) = vertices.last() else {
        return 0.0;
    };
    let (p, n) = (
        last.counts.positives() as u128,
        last.counts.negatives() as u128,
    );
    let twice_area: u128 = vertices
        .windows(2)
        .map(|w| {
            let dfp = (w[1].counts.fp - w[0].counts.fp) as u128;
            dfp * (w[0].counts.tp + w[1].counts.tp) as u128
        })
        .sum();
    twice_area as f64 / (2 * p * n) as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialAuc {
    pub raw: f64,
    /// `raw / (fpr_hi - fpr_lo)`, in `[0, 1]`.
    pub normalized: f64,
}

/// Area under the curve restricted to `fpr_lo <= fpr <= fpr_hi`, cutting
/// segments at the bounds by linear interpolation.
pub fn partial_auc(curve: &RocCurve, fpr_lo: f64, fpr_hi: f64) -> Result<PartialAuc> {
    if !(0.0..1.0).contains(&fpr_lo) || !(fpr_lo < fpr_hi && fpr_hi <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "partial AUC bounds must satisfy 0 <= lo < hi <= 1, got [{fpr_lo}, {fpr_hi}]"
        )));
    }
    let mut raw = 0.0;
    for w in curve.vertices.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if b.fpr <= a.fpr {
            continue;
        }
        let lo = a.fpr.max(fpr_lo);
        let hi = b.fpr.min(fpr_hi);
        if hi <= lo {
            continue;
        }
        let along = |x: f64| {
            if x == a.fpr {
                a.tpr
            } else if x == b.fpr {
                b.tpr
            } else {
                a.tpr + (b.tpr - a.tpr) * (x - a.fpr) / (b.fpr - a.fpr)
            }
        };
        raw += (hi - lo) * (along(lo) + along(hi)) / 2.0;
    }
    Ok(PartialAuc {
        raw,
        normalized: raw / (fpr_hi - fpr_lo),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HullVertex {
    pub fpr: f64,
    pub tpr: f64,
    pub system: String,
    /// Canonical threshold of the originating system's vertex.
    pub threshold: f64,
}

/// Upper convex hull of one or more ROC curves over the same labeling.
#[derive(Debug, Clone, PartialEq)]
pub struct RocHull {
    vertices: Vec<HullVertex>,
}

/// A maximal run of consecutive hull vertices from one system.
#[derive(Debug, Clone, PartialEq)]
pub struct HullRegion {
    pub system: String,
    pub fpr_from: f64,
    pub fpr_to: f64,
}

impl RocHull {
    pub fn vertices(&self) -> &[HullVertex] {
        &self.vertices
    }

    pub fn tpr_at(&self, fpr: f64) -> f64 {
        interpolate(&self.vertices, fpr, |v| (v.fpr, v.tpr))
    }

    pub fn auc(&self) -> f64 {
        trapezoid_sum(self.vertices.iter().map(|v| (v.fpr, v.tpr)))
    }

    pub fn regions(&self) -> Vec<HullRegion> {
        let mut out: Vec<HullRegion> = Vec::new();
        for v in &self.vertices {
            match out.last_mut() {
                Some(r) if r.system == v.system => r.fpr_to = v.fpr,
                _ => out.push(HullRegion {
                    system: v.system.clone(),
                    fpr_from: v.fpr,
                    fpr_to: v.fpr,
                }),
            }
        }
        out
    }
}

/// Combines curves into their ROC convex hull. Points shared by several
/// systems are attributed to the system whose curve has fewer vertices,
/// then to the earlier input.
pub fn convex_hull(curves: &[(&str, &RocCurve)]) -> Result<RocHull> {
    let Some(&(_, first)) = curves.first() else {
        return Err(Error::InvalidArgument(
            "convex hull needs at least one curve".into(),
        ));
    };
    for &(name, c) in &curves[1..] {
        if c.p_count != first.p_count
            || c.n_count != first.n_count
            || c.fingerprint != first.fingerprint
        {
            return Err(Error::MismatchedGroundTruth(format!(
                "{name} (P={}, N={}) does not match {} (P={}, N={})",
                c.p_count, c.n_count, curves[0].0, first.p_count, first.n_count
            )));
        }
    }

    struct Candidate<'a> {
        fpr: f64,
        tpr: f64,
        threshold: f64,
        tp: i128,
        fp: i128,
        system: &'a str,
        rank: (usize, usize),
    }
    let mut points: Vec<Candidate> = curves
        .iter()
        .enumerate()
        .flat_map(|(i, &(name, c))| {
            c.vertices.iter().map(move |v| Candidate {
                fpr: v.fpr,
                tpr: v.tpr,
                threshold: v.threshold,
                tp: v.counts.tp as i128,
                fp: v.counts.fp as i128,
                system: name,
                rank: (c.vertices.len(), i),
            })
        })
        .collect();
    // All curves share P and N, so integer counts order and compare points exactly.
    points.sort_by(|a, b| {
        a.fp.cmp(&b.fp)
            .then(a.tp.cmp(&b.tp))
            .then(a.rank.cmp(&b.rank))
    });
    points.dedup_by(|later, earlier| later.fp == earlier.fp && later.tp == earlier.tp);

    // Monotone chain, upper half: drop the middle point of every
    // non-clockwise turn so only strictly concave corners remain.
    let mut hull: Vec<Candidate> = Vec::with_capacity(points.len());
    for p in points {
        while hull.len() >= 2 {
            let o = &hull[hull.len() - 2];
            let a = &hull[hull.len() - 1];
            let cross = (a.fp - o.fp) * (p.tp - o.tp) - (a.tp - o.tp) * (p.fp - o.fp);
            if cross >= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }

    Ok(RocHull {
        vertices: hull
            .into_iter()
            .map(|c| HullVertex {
                fpr: c.fpr,
                tpr: c.tpr,
                system: c.system.to_string(),
                threshold: c.threshold,
            })
            .collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrPoint {
    pub recall: f64,
    pub precision: f64,
    pub threshold: f64,
}

/// Precision-recall points at every vertex where precision is defined.
pub fn pr_points(curve: &RocCurve) -> Vec<PrPoint> {
    curve
        .vertices
        .iter()
        .filter_map(|v| {
            let r = rates(&v.counts).ok()?;
            Some(PrPoint {
                recall: r.recall,
                precision: r.precision?,
                threshold: v.threshold,
            })
        })
        .collect()
}

/// F1 score when flagging every segment with risk `>= threshold`; `None`
/// where precision is undefined or precision + recall is zero.
pub fn f1_at(curve: &RocCurve, threshold: f64) -> Option<f64> {
    let r = rates(&curve.vertex_at(threshold).counts).ok()?;
    let precision = r.precision?;
    let denom = precision + r.recall;
    (denom > 0.0).then(|| 2.0 * precision * r.recall / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Label, Orientation};
    use approx::assert_abs_diff_eq;

    pub(crate) fn worked_example() -> Dataset {
        use Label::*;
        Dataset::from_raw(
            [
                ("1", Positive, 95.0),
                ("2", Negative, 95.0),
                ("3", Negative, 100.0),
                ("4", Negative, 95.0),
                ("5", Positive, 25.0),
                ("6", Positive, 93.0),
                ("7", Positive, 100.0),
                ("8", Positive, 99.0),
                ("9", Negative, 75.0),
                ("10", Positive, 99.0),
            ],
            Orientation::HigherIsBetter,
        )
        .unwrap()
    }

    #[test]
    fn worked_example_vertices() {
        let curve = build_roc(&worked_example()).unwrap();
        let got: Vec<(f64, f64, f64)> = curve
            .vertices()
            .iter()
            .map(|v| (v.fpr, v.tpr, v.raw_threshold(Orientation::HigherIsBetter)))
            .collect();
        let expected = [
            (0.0, 0.0, f64::NEG_INFINITY),
            (0.0, 1.0 / 6.0, 25.0),
            (0.25, 1.0 / 6.0, 75.0),
            (0.25, 2.0 / 6.0, 93.0),
            (0.75, 3.0 / 6.0, 95.0),
            (0.75, 5.0 / 6.0, 99.0),
            (1.0, 1.0, 100.0),
        ];
        assert_eq!(got.len(), expected.len());
        for (g, e) in got.iter().zip(expected) {
            assert_abs_diff_eq!(g.0, e.0, epsilon = 1e-12);
            assert_abs_diff_eq!(g.1, e.1, epsilon = 1e-12);
            assert_eq!(g.2, e.2);
        }
        assert_eq!(curve.vertices()[0].threshold, f64::INFINITY);
    }

    #[test]
    fn perfect_separation() {
        let d = Dataset::from_raw(
            [("p", Label::Positive, 1.0), ("n", Label::Negative, 0.0)],
            Orientation::HigherIsWorse,
        )
        .unwrap();
        let curve = build_roc(&d).unwrap();
        let pts: Vec<_> = curve.vertices().iter().map(|v| (v.fpr, v.tpr)).collect();
        assert_eq!(pts, vec![(0.0, 0.0), (0.0, 1.0), (1.0, 1.0)]);
        assert_eq!(auc(&curve), 1.0);
        let pa = partial_auc(&curve, 0.0, 0.1).unwrap();
        assert_abs_diff_eq!(pa.normalized, 1.0, epsilon = 1e-12);
        let pr = pr_points(&curve);
        assert_eq!(pr[0].precision, 1.0);
        assert_eq!(pr[0].recall, 1.0);
        assert_eq!(f1_at(&curve, 1.0), Some(1.0));
    }

    #[test]
    fn degenerate_rejected() {
        let d = Dataset::from_raw(
            [("p", Label::Positive, 1.0), ("q", Label::Positive, 0.0)],
            Orientation::HigherIsWorse,
        )
        .unwrap();
        assert!(matches!(
            build_roc(&d),
            Err(Error::DegenerateClass {
                class: Label::Negative
            })
        ));
    }

    #[test]
    fn worked_example_auc_and_partial() {
        let curve = build_roc(&worked_example()).unwrap();
        assert_abs_diff_eq!(auc(&curve), 11.5 / 24.0, epsilon = 1e-12);
        let full = partial_auc(&curve, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(full.raw, auc(&curve), epsilon = 1e-15);
        assert_abs_diff_eq!(full.normalized, auc(&curve), epsilon = 1e-15);
        let early = partial_auc(&curve, 0.0, 0.25).unwrap();
        assert_abs_diff_eq!(early.raw, 0.25 / 6.0, epsilon = 1e-12);
        // Cut inside the tied 95 segment: (0.25, 1/3) -> (0.75, 1/2).
        let mid = partial_auc(&curve, 0.5, 0.75).unwrap();
        let y_half = 1.0 / 3.0 + (0.5 - 1.0 / 3.0) * 0.5;
        assert_abs_diff_eq!(mid.raw, 0.25 * (y_half + 0.5) / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn partial_auc_rejects_bad_bounds() {
        let curve = build_roc(&worked_example()).unwrap();
        assert!(partial_auc(&curve, 0.5, 0.5).is_err());
        assert!(partial_auc(&curve, 0.6, 0.2).is_err());
        assert!(partial_auc(&curve, -0.1, 0.2).is_err());
        assert!(partial_auc(&curve, 0.0, 1.2).is_err());
    }

    #[test]
    fn pr_and_f1_at_93() {
        let curve = build_roc(&worked_example()).unwrap();
        let t93 = -93.0;
        let v = curve.vertex_at(t93);
        assert_eq!((v.counts.tp, v.counts.fp), (2, 1));
        let f1 = f1_at(&curve, t93).unwrap();
        assert_abs_diff_eq!(f1, 4.0 / 9.0, epsilon = 1e-12);
        let pt = pr_points(&curve)
            .into_iter()
            .find(|p| p.threshold == t93)
            .unwrap();
        assert_abs_diff_eq!(pt.recall, 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pt.precision, 2.0 / 3.0, epsilon = 1e-12);
        // Origin: nothing flagged, precision undefined and skipped.
        assert_eq!(f1_at(&curve, f64::INFINITY), None);
        assert_eq!(pr_points(&curve).len(), curve.vertices().len() - 1);
    }

    #[test]
    fn vertex_at_between_scores() {
        let curve = build_roc(&worked_example()).unwrap();
        // Raw 94 lies between the 93 and 95 groups: flags 25, 75, 93.
        let v = curve.vertex_at(-94.0);
        assert_eq!(v.counts.flagged(), 3);
        assert_eq!(curve.vertex_at(-1000.0).counts.flagged(), 10);
    }

    #[test]
    fn tpr_at_uses_max_on_vertical() {
        let curve = build_roc(&worked_example()).unwrap();
        assert_abs_diff_eq!(curve.tpr_at(0.0), 1.0 / 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(curve.tpr_at(0.75), 5.0 / 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(curve.tpr_at(0.5), 5.0 / 12.0, epsilon = 1e-12);
        assert_eq!(curve.tpr_at(1.0), 1.0);
    }

    #[test]
    fn hull_of_single_curve() {
        let d = Dataset::from_raw(
            [
                ("a", Label::Positive, 4.0),
                ("b", Label::Positive, 3.0),
                ("c", Label::Negative, 2.0),
                ("d", Label::Positive, 1.0),
                ("e", Label::Negative, 0.0),
            ],
            Orientation::HigherIsWorse,
        )
        .unwrap();
        let curve = build_roc(&d).unwrap();
        let hull = convex_hull(&[("m", &curve)]).unwrap();
        // Collinear (0, 1/3)-(0, 2/3) collapses to the vertical run's top.
        let pts: Vec<_> = hull.vertices().iter().map(|v| (v.fpr, v.tpr)).collect();
        assert_eq!(
            pts,
            vec![(0.0, 0.0), (0.0, 2.0 / 3.0), (0.5, 1.0), (1.0, 1.0)]
        );
        assert_abs_diff_eq!(hull.auc(), 11.0 / 12.0, epsilon = 1e-12);
        assert!(hull.auc() > auc(&curve));

        let perfect = Dataset::from_raw(
            [("p", Label::Positive, 1.0), ("n", Label::Negative, 0.0)],
            Orientation::HigherIsWorse,
        )
        .unwrap();
        let curve = build_roc(&perfect).unwrap();
        let hull = convex_hull(&[("m", &curve)]).unwrap();
        let hull_pts: Vec<_> = hull
            .vertices()
            .iter()
            .map(|v| (v.fpr, v.tpr, v.threshold))
            .collect();
        let curve_pts: Vec<_> = curve
            .vertices()
            .iter()
            .map(|v| (v.fpr, v.tpr, v.threshold))
            .collect();
        assert_eq!(hull_pts, curve_pts);
    }

    #[test]
    fn hull_rejects_mismatched_labels() {
        let a = build_roc(&worked_example()).unwrap();
        let other = Dataset::from_raw(
            [("x", Label::Positive, 1.0), ("y", Label::Negative, 0.0)],
            Orientation::HigherIsWorse,
        )
        .unwrap();
        let b = build_roc(&other).unwrap();
        assert!(matches!(
            convex_hull(&[("a", &a), ("b", &b)]),
            Err(Error::MismatchedGroundTruth(_))
        ));
        assert!(convex_hull(&[]).is_err());
    }

    #[test]
    fn hull_identical_curves() {
        let a = build_roc(&worked_example()).unwrap();
        let hull = convex_hull(&[("x", &a), ("y", &a)]).unwrap();
        for v in hull.vertices() {
            // Equal vertex counts: the earlier input wins every tie.
            assert_eq!(v.system, "x");
        }
        for v in a.vertices() {
            assert!(hull.tpr_at(v.fpr) >= a.tpr_at(v.fpr));
        }
    }
}
