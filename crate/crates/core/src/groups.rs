//! Finitely generated groups of symplectic maps: word lengths, translation
//! lengths, cocycle norms and the distortion report.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use rayon::prelude::*;

use crate::cocycle::{CocycleContext, IsotopySpec, FIXED_POINT_TOL};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::scalar::Scalar;
use crate::symplectomap::SympMap;

/// Default radius of the Cayley-ball search for groups without a known
/// normal form.
pub const DEFAULT_BFS_RADIUS: usize = 8;
/// Probe images closer than this are treated as the same group element.
pub const PROBE_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupStructure {
    /// Generators are known to be free; free reduction is a normal form.
    Free,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct GeneratingSet<S> {
    generators: Vec<(String, SympMap<S>)>,
    structure: GroupStructure,
    probes: Vec<Point<S>>,
    bfs_radius: usize,
}

impl<S: Scalar> GeneratingSet<S> {
    pub fn new(generators: Vec<(String, SympMap<S>)>, structure: GroupStructure) -> Result<Self> {
        let mut seen = HashSet::new();
        for (name, _) in &generators {
            if name.is_empty() || name.contains(char::is_whitespace) || name.contains('^') {
                return Err(Error::Configuration(format!(
                    "invalid generator name {name:?}"
                )));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::Configuration(format!(
                    "duplicate generator name {name:?}"
                )));
            }
        }
        Ok(Self {
            generators,
            structure,
            probes: Vec::new(),
            bfs_radius: DEFAULT_BFS_RADIUS,
        })
    }

    /// Points whose images identify group elements during the Cayley-ball
    /// search.
    pub fn with_probes(mut self, probes: Vec<Point<S>>) -> Self {
        self.probes = probes;
        self
    }

    pub fn with_bfs_radius(mut self, radius: usize) -> Self {
        self.bfs_radius = radius;
        self
    }

    pub fn structure(&self) -> GroupStructure {
        self.structure
    }

    pub fn generators(&self) -> &[(String, SympMap<S>)] {
        &self.generators
    }

    pub fn names(&self) -> Vec<&str> {
        self.generators.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&SympMap<S>> {
        self.generators
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, g)| g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub name: String,
    pub inverse: bool,
}

impl Letter {
    pub fn new(name: impl Into<String>, inverse: bool) -> Self {
        Self {
            name: name.into(),
            inverse,
        }
    }

    pub fn inverted(&self) -> Self {
        Self {
            name: self.name.clone(),
            inverse: !self.inverse,
        }
    }
}

/// Word in generators and their inverses. Letters are written left to
/// right and composed as maps, so `"a b"` is `a o b`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupWord {
    pub letters: Vec<Letter>,
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| {
                if l.inverse {
                    format!("{}^-1", l.name)
                } else {
                    l.name.clone()
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

impl GroupWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    /// Parses whitespace-separated letters such as `"a b^-1 a"`; `"e"` or
    /// the empty string is the identity.
    pub fn parse(text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            if token == "e" {
                continue;
            }
            let (name, inverse) = match token.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (token, false),
            };
            if name.is_empty() || name.contains('^') {
                return Err(Error::Configuration(format!(
                    "cannot parse letter {token:?}"
                )));
            }
            letters.push(Letter::new(name, inverse));
        }
        Ok(Self { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(Letter::inverted).collect(),
        }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Self { letters }
    }

    /// `w^n`; negative `n` uses the inverse word.
    pub fn power(&self, n: i64) -> Self {
        let base = if n >= 0 { self.clone() } else { self.inverse() };
        let mut letters = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            letters.extend(base.letters.iter().cloned());
        }
        Self { letters }
    }

    /// Cancels adjacent `s s^-1` pairs until none remain.
    pub fn free_reduce(&self) -> Self {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.len());
        for l in &self.letters {
            if stack
                .last()
                .is_some_and(|top| top.name == l.name && top.inverse != l.inverse)
            {
                stack.pop();
            } else {
                stack.push(l.clone());
            }
        }
        Self { letters: stack }
    }

    /// Free reduction followed by cancellation of inverse letters at the two
    /// ends; `|w^n| = n |w_cyc| + const` in a free group.
    pub fn cyclic_reduce(&self) -> Self {
        let mut w = self.free_reduce().letters;
        while w.len() >= 2 {
            let (first, last) = (&w[0], &w[w.len() - 1]);
            if first.name == last.name && first.inverse != last.inverse {
                w.remove(0);
                w.pop();
            } else {
                break;
            }
        }
        Self { letters: w }
    }

    fn check_letters<S: Scalar>(&self, set: &GeneratingSet<S>) -> Result<()> {
        for l in &self.letters {
            if set.get(&l.name).is_none() {
                return Err(Error::Configuration(format!(
                    "unknown generator {:?}",
                    l.name
                )));
            }
        }
        Ok(())
    }

    /// The map `s_1 o s_2 o ... o s_k`.
    pub fn evaluate<S: Scalar>(&self, set: &GeneratingSet<S>) -> Result<SympMap<S>> {
        self.check_letters(set)?;
        let mut factors = Vec::with_capacity(self.len());
        for l in &self.letters {
            let g = set.get(&l.name).expect("letters were checked");
            factors.push(if l.inverse { g.inverse()? } else { g.clone() });
        }
        Ok(match factors.len() {
            0 => SympMap::Identity,
            1 => factors.pop().expect("one factor"),
            _ => SympMap::Word(factors),
        })
    }

    /// Every freely reduced word of length at most `max_len` over `names`,
    /// shortest first.
    pub fn all_reduced(names: &[&str], max_len: usize) -> Vec<Self> {
        let alphabet: Vec<Letter> = names
            .iter()
            .flat_map(|n| [Letter::new(*n, false), Letter::new(*n, true)])
            .collect();
        let mut out = vec![Self::identity()];
        let mut frontier = vec![Self::identity()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for l in &alphabet {
                    if w.letters
                        .last()
                        .is_some_and(|t| t.name == l.name && t.inverse != l.inverse)
                    {
                        continue;
                    }
                    let mut letters = w.letters.clone();
                    letters.push(l.clone());
                    next.push(Self { letters });
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WordLength {
    pub length: usize,
    /// False when the Cayley-ball search hit its radius cap and `length` is
    /// only an upper bound.
    pub exact: bool,
}

/// Images of the probe points, flattened.
type Fingerprint = Vec<f64>;

struct FingerprintIndex {
    buckets: HashMap<i64, Vec<usize>>,
    entries: Vec<Fingerprint>,
}

impl FingerprintIndex {
    fn new() -> Self {
        Self {
            buckets: HashMap::new(),
            entries: Vec::new(),
        }
    }

    fn key(fp: &Fingerprint) -> i64 {
        (fp[0] / (16.0 * PROBE_TOL)).floor() as i64
    }

    fn find(&self, fp: &Fingerprint) -> Option<usize> {
        let k = Self::key(fp);
        for b in [k - 1, k, k + 1] {
            if let Some(ids) = self.buckets.get(&b) {
                for &i in ids {
                    let e = &self.entries[i];
                    if e.iter().zip(fp).all(|(a, c)| (a - c).abs() <= PROBE_TOL) {
                        return Some(i);
                    }
                }
            }
        }
        None
    }

    fn insert(&mut self, fp: Fingerprint) -> usize {
        let id = self.entries.len();
        self.buckets.entry(Self::key(&fp)).or_default().push(id);
        self.entries.push(fp);
        id
    }
}

fn fingerprint<S: Scalar>(points: &[Point<S>]) -> Fingerprint {
    points.iter().flat_map(|p| p.to_f64()).collect()
}

/// `|w|_S`: exact after free reduction for free groups; otherwise a
/// breadth-first search of the Cayley ball, falling back to the reduced
/// letter count (flagged inexact) beyond the radius cap.
pub fn word_length<S: Scalar>(w: &GroupWord, set: &GeneratingSet<S>) -> Result<WordLength> {
    w.check_letters(set)?;
    let reduced = w.free_reduce();
    if set.structure == GroupStructure::Free || reduced.is_empty() {
        return Ok(WordLength {
            length: reduced.len(),
            exact: true,
        });
    }
    if set.probes.is_empty() {
        return Err(Error::Configuration(
            "Cayley-ball search needs probe points".into(),
        ));
    }
    let target_map = reduced.evaluate(set)?;
    let target = fingerprint(
        &set.probes
            .iter()
            .map(|p| target_map.apply(p))
            .collect::<Result<Vec<_>>>()?,
    );
    let mut steps: Vec<SympMap<S>> = Vec::new();
    for (_, g) in &set.generators {
        steps.push(g.clone());
        steps.push(g.inverse()?);
    }
    let mut index = FingerprintIndex::new();
    index.insert(fingerprint(&set.probes));
    if index.find(&target).is_some() {
        return Ok(WordLength {
            length: 0,
            exact: true,
        });
    }
    let mut queue: VecDeque<(Vec<Point<S>>, usize)> = VecDeque::new();
    queue.push_back((set.probes.clone(), 0));
    while let Some((images, depth)) = queue.pop_front() {
        if depth >= set.bfs_radius {
            continue;
        }
        for s in &steps {
            let next = images
                .iter()
                .map(|p| s.apply(p))
                .collect::<Result<Vec<_>>>()?;
            let fp = fingerprint(&next);
            if index.find(&fp).is_some() {
                continue;
            }
            if fp
                .iter()
                .zip(&target)
                .all(|(a, b)| (a - b).abs() <= PROBE_TOL)
            {
                return Ok(WordLength {
                    length: depth + 1,
                    exact: true,
                });
            }
            index.insert(fp);
            queue.push_back((next, depth + 1));
        }
    }
    Ok(WordLength {
        length: reduced.len(),
        exact: false,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TranslationLength {
    /// `inf_{n <= n_max} |g^n|_S / n`.
    pub estimate: f64,
    /// `(n, |g^n|_S, exact)`.
    pub table: Vec<(usize, usize, bool)>,
    /// `lim |g^n| / n` when known in closed form (free groups: the length of
    /// the cyclically reduced word).
    pub limit: Option<f64>,
}

pub fn translation_length_estimate<S: Scalar>(
    g: &GroupWord,
    set: &GeneratingSet<S>,
    n_max: usize,
) -> Result<TranslationLength> {
    if n_max == 0 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    let mut table = Vec::with_capacity(n_max);
    let mut estimate = f64::INFINITY;
    for n in 1..=n_max {
        let wl = word_length(&g.power(n as i64), set)?;
        estimate = estimate.min(wl.length as f64 / n as f64);
        table.push((n, wl.length, wl.exact));
    }
    let limit = (set.structure == GroupStructure::Free).then(|| g.cyclic_reduce().len() as f64);
    Ok(TranslationLength {
        estimate,
        table,
        limit,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormEstimate<S> {
    /// `max_{h in sample} |G(g, h)|`, a lower bound for `|g|_G`.
    pub lower: S,
    /// Closed-form upper bound for Hamiltonian flow maps.
    pub upper: Option<S>,
}

/// `sup_y |F_T(y)| <= T (C sup |X| + sup |H|)` doubled, where `C` bounds the
/// primitive over the support and `|X| <= |grad H|` in metric norm.
pub fn analytic_upper_bound<S: Scalar>(ctx: &CocycleContext<S>, g: &SympMap<S>) -> Option<S> {
    match g {
        SympMap::Identity => Some(S::zero()),
        SympMap::Flow(f) | SympMap::CompactBump(f) => {
            let h = f.hamiltonian();
            let (vb, gb) = (h.value_bound()?, h.gradient_bound()?);
            let c = if ctx.model().is_disk() {
                ctx.model()
                    .primitive_bound_on_ball(ctx.model().basepoint(), S::zero())
            } else {
                let s = h.support()?;
                ctx.model().primitive_bound_on_ball(&s.center, s.radius)
            };
            let t = f.time().abs();
            Some(S::lit(2.0) * t * (c * gb + vb))
        }
        _ => None,
    }
}

pub fn semibounded_norm_estimate<S: Scalar>(
    ctx: &CocycleContext<S>,
    g: &SympMap<S>,
    sample: &[SympMap<S>],
) -> Result<NormEstimate<S>> {
    if sample.is_empty() {
        return Err(Error::Precondition(
            "norm estimate needs a nonempty sample".into(),
        ));
    }
    let mut lower = S::zero();
    for h in sample {
        lower = lower.max(ctx.cocycle(g, h)?.abs());
    }
    Ok(NormEstimate {
        lower,
        upper: analytic_upper_bound(ctx, g),
    })
}

/// `max_h (|G(fg,h)| - |G(f,g)| - |G(f,gh)| - |G(g,h)|)`; nonpositive up to
/// quadrature error by the cocycle identity.
pub fn product_norm_check<S: Scalar>(
    ctx: &CocycleContext<S>,
    f: &SympMap<S>,
    g: &SympMap<S>,
    sample: &[SympMap<S>],
) -> Result<S> {
    if sample.is_empty() {
        return Err(Error::Precondition(
            "product norm check needs a nonempty sample".into(),
        ));
    }
    let fg = f.compose(g);
    let fg_term = ctx.cocycle(f, g)?.abs();
    let mut worst = S::neg_infinity();
    for h in sample {
        let gh = g.compose(h);
        let r = ctx.cocycle(&fg, h)?.abs()
            - fg_term
            - ctx.cocycle(f, &gh)?.abs()
            - ctx.cocycle(g, h)?.abs();
        worst = worst.max(r);
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LipschitzRow<S> {
    pub word: String,
    pub word_length: usize,
    pub sampled_norm: S,
    pub bound: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LipschitzReport<S> {
    pub rows: Vec<LipschitzRow<S>>,
    /// `max (sampled_norm - bound)`; nonpositive when the surrogate holds.
    pub max_violation: S,
}

/// Checks `sampled |w|_G <= 2 max_s upper(s) |w|_S + slack` for every word.
pub fn lipschitz_surrogate<S: Scalar>(
    ctx: &CocycleContext<S>,
    set: &GeneratingSet<S>,
    words: &[GroupWord],
    sample: &[SympMap<S>],
    slack: S,
) -> Result<LipschitzReport<S>> {
    let mut top = S::zero();
    for (name, g) in set.generators() {
        let u = analytic_upper_bound(ctx, g).ok_or_else(|| {
            Error::Precondition(format!("generator {name} has no analytic norm bound"))
        })?;
        top = top.max(u);
    }
    let two = S::lit(2.0);
    let rows = words
        .par_iter()
        .map(|w| {
            let len = word_length(w, set)?.length;
            let map = w.evaluate(set)?;
            let est = semibounded_norm_estimate(ctx, &map, sample)?.lower;
            Ok(LipschitzRow {
                word: w.to_string(),
                word_length: len,
                sampled_norm: est,
                bound: two * top * S::from_usize_lossy(len) + slack,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_violation = rows
        .iter()
        .fold(S::neg_infinity(), |m, r| m.max(r.sampled_norm - r.bound));
    Ok(LipschitzReport {
        rows,
        max_violation,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearityRow<S> {
    pub n: usize,
    pub value: S,
    pub expected: S,
    pub relative_deviation: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistortionReport<S> {
    /// `G(g, h)`.
    pub cocycle_value: S,
    /// `F_1(h x) - F_1(x)`.
    pub action_difference: S,
    pub cross_check_residual: S,
    pub linearity: Vec<LinearityRow<S>>,
    pub max_relative_deviation: S,
    /// `|G(g^n, h)|` strictly increasing in `n` (when `G(g, h) != 0`).
    pub monotone_growth: bool,
    /// `(generator, sampled lower bound of its norm, analytic upper bound)`.
    pub generator_norms: Vec<(String, S, Option<S>)>,
    /// `|G(g,h)| / (2 max_s sampled norm(s))`, not certified.
    pub diagnostic_bound: S,
    /// `|G(g,h)| / (2 max_s upper(s))`, when every generator has an upper
    /// bound; a certified lower bound for the translation length.
    pub certified_bound: Option<S>,
    pub caveats: Vec<String>,
}

/// Distortion report for the time-one map `g` of `iso`, which must fix the
/// basepoint `x` and `h(x)`.
pub fn distortion_report<S: Scalar>(
    ctx: &CocycleContext<S>,
    iso: &IsotopySpec<S>,
    h: &SympMap<S>,
    set: &GeneratingSet<S>,
    sample: &[SympMap<S>],
    n_max: usize,
) -> Result<DistortionReport<S>> {
    let g = iso.time_one_map(ctx.model())?;
    let x = ctx.basepoint().clone();
    let hx = h.apply(&x)?;
    let tol = S::lit(FIXED_POINT_TOL);
    for p in [&x, &hx] {
        if g.apply(p)?.distance_euclid(p) > tol {
            return Err(Error::Precondition(format!(
                "{:?} is not fixed by the time-one map",
                p.to_f64()
            )));
        }
    }
    let value = ctx.hom_gxh(h, &g)?;
    let action = ctx.action_difference(iso, &x, &hx)?;
    let values = (1..=n_max)
        .into_par_iter()
        .map(|n| ctx.hom_gxh(h, &g.power(n as i64)?))
        .collect::<Result<Vec<_>>>()?;
    let mut linearity = Vec::with_capacity(n_max);
    let mut max_dev = S::zero();
    let mut monotone = true;
    let mut prev = S::zero();
    for (i, v) in values.into_iter().enumerate() {
        let n = i + 1;
        let expected = S::from_usize_lossy(n) * value;
        let dev = if expected == S::zero() {
            v.abs()
        } else {
            ((v - expected) / expected).abs()
        };
        max_dev = max_dev.max(dev);
        if value != S::zero() && v.abs() <= prev {
            monotone = false;
        }
        prev = v.abs();
        linearity.push(LinearityRow {
            n,
            value: v,
            expected,
            relative_deviation: dev,
        });
    }
    let mut generator_norms = Vec::new();
    let mut top_lower = S::zero();
    let mut top_upper = Some(S::zero());
    for (name, s) in set.generators() {
        let est = semibounded_norm_estimate(ctx, s, sample)?;
        top_lower = top_lower.max(est.lower);
        top_upper = match (top_upper, est.upper) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        generator_norms.push((name.clone(), est.lower, est.upper));
    }
    let two = S::lit(2.0);
    let diagnostic_bound = if value == S::zero() {
        S::zero()
    } else if top_lower > S::zero() {
        value.abs() / (two * top_lower)
    } else {
        S::infinity()
    };
    let certified_bound = top_upper.map(|u| {
        if value == S::zero() {
            S::zero()
        } else {
            value.abs() / (two * u)
        }
    });
    let mut caveats = vec![
        "generator norms are sampled lower bounds, so the diagnostic bound over-estimates the certified one".to_string(),
        "the translation length is a limit; finite tables give the infimum over the sampled range".to_string(),
    ];
    if set.structure() == GroupStructure::Unknown {
        caveats
            .push("word lengths beyond the Cayley-ball radius are upper bounds only".to_string());
    }
    Ok(DistortionReport {
        cocycle_value: value,
        action_difference: action,
        cross_check_residual: (value - action).abs(),
        linearity,
        max_relative_deviation: max_dev,
        monotone_growth: monotone,
        generator_norms,
        diagnostic_bound,
        certified_bound,
        caveats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ManifoldModel, PlanePrimitive};

    fn free_ab() -> GeneratingSet<f64> {
        GeneratingSet::new(
            vec![
                ("a".into(), SympMap::translation(vec![1.0, 0.0])),
                ("b".into(), SympMap::translation(vec![0.0, 1.0])),
            ],
            GroupStructure::Free,
        )
        .unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        let w = GroupWord::parse("a b^-1  a").unwrap();
        assert_eq!(w.to_string(), "a b^-1 a");
        assert_eq!(GroupWord::parse("").unwrap(), GroupWord::identity());
        assert!(GroupWord::parse("a^2").is_err());
    }

    #[test]
    fn free_word_lengths() {
        let s = free_ab();
        let wl = |t: &str| {
            word_length(&GroupWord::parse(t).unwrap(), &s)
                .unwrap()
                .length
        };
        assert_eq!(wl(""), 0);
        assert_eq!(wl("a b b^-1 a"), 2);
        assert_eq!(
            word_length(&GroupWord::parse("a b").unwrap().power(5), &s)
                .unwrap()
                .length,
            10
        );
        assert!(word_length(&GroupWord::parse("c").unwrap(), &s).is_err());
    }

    #[test]
    fn translation_lengths_in_free_group() {
        let s = free_ab();
        let a = translation_length_estimate(&GroupWord::parse("a").unwrap(), &s, 8).unwrap();
        assert_eq!(a.estimate, 1.0);
        let conj =
            translation_length_estimate(&GroupWord::parse("a b a^-1").unwrap(), &s, 10).unwrap();
        assert_eq!(conj.table[0].1, 3);
        assert_eq!(conj.table[9].1, 12);
        assert!((conj.estimate - 1.2).abs() < 1e-15);
        assert_eq!(conj.limit, Some(1.0));
        let e = translation_length_estimate(&GroupWord::identity(), &s, 4).unwrap();
        assert_eq!(e.estimate, 0.0);
    }

    #[test]
    fn cayley_search_detects_commuting_translations() {
        let s = GeneratingSet::new(
            vec![
                ("a".into(), SympMap::translation(vec![1.0, 0.0])),
                ("b".into(), SympMap::translation(vec![0.0, 1.0])),
            ],
            GroupStructure::Unknown,
        )
        .unwrap()
        .with_probes(vec![Point::new(vec![0.1, 0.2])]);
        // a b a^-1 b^-1 is trivial in Z^2
        let w = GroupWord::parse("a b a^-1 b^-1 a").unwrap();
        assert_eq!(
            word_length(&w, &s).unwrap(),
            WordLength {
                length: 1,
                exact: true
            }
        );
        let far = GroupWord::parse("a").unwrap().power(9);
        assert_eq!(
            word_length(&far, &s).unwrap(),
            WordLength {
                length: 9,
                exact: false
            }
        );
    }

    #[test]
    fn all_reduced_counts() {
        let words = GroupWord::all_reduced(&["a", "b"], 3);
        assert_eq!(words.len(), 1 + 4 + 12 + 36);
        assert!(words.iter().all(|w| w.free_reduce() == *w));
    }

    #[test]
    fn product_norm_check_on_translations() {
        let ctx = CocycleContext::new(ManifoldModel::plane(1, PlanePrimitive::Radial));
        let f = SympMap::translation(vec![0.3, -0.4]);
        let g = SympMap::translation(vec![1.1, 0.2]);
        let sample = vec![
            SympMap::translation(vec![0.5, 0.5]),
            SympMap::translation(vec![-2.0, 0.7]),
        ];
        assert!(product_norm_check(&ctx, &f, &g, &sample).unwrap() <= 1e-12);
        let est = semibounded_norm_estimate(&ctx, &SympMap::identity(), &sample).unwrap();
        assert_eq!(est.lower, 0.0);
    }
}
