//! Continuous piecewise-linear functions over exact rationals.
//!
//! A [`PwlFunction`] is stored canonically: breakpoints strictly increase,
//! adjacent segments are distinct affine forms and agree at their shared
//! breakpoint. With no domain attached the outer segments extend to
//! infinity; with a domain `[lo, hi]` all breakpoints lie strictly inside it.

use std::cmp::Ordering;

use num_traits::Zero;

use crate::affine::AffineForm;
use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo >= hi {
            return Err(Error::EmptyInterval {
                lo: rational::format(&lo),
                hi: rational::format(&hi),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn midpoint(&self) -> Rational {
        rational::midpoint(&self.lo, &self.hi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PwlFunction {
    breakpoints: Vec<Rational>,
    segments: Vec<AffineForm>,
    domain: Option<Interval>,
}

/// Lower envelope of a set of lines, with the index of a minimizing line
/// for every segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineEnvelope {
    pub function: PwlFunction,
    pub witnesses: Vec<usize>,
}

/// Pieces with a payload tag, used while merging.
#[derive(Clone, Debug)]
struct Tagged {
    breaks: Vec<Rational>,
    segs: Vec<AffineForm>,
    tags: Vec<usize>,
}

impl Tagged {
    fn single(f: AffineForm, tag: usize) -> Self {
        Self {
            breaks: Vec::new(),
            segs: vec![f],
            tags: vec![tag],
        }
    }

    /// Drops breakpoints between identical neighbours; the left tag wins.
    fn canonicalize(mut self) -> Self {
        let mut breaks = Vec::with_capacity(self.breaks.len());
        let mut segs: Vec<AffineForm> = Vec::with_capacity(self.segs.len());
        let mut tags = Vec::with_capacity(self.tags.len());
        let mut seg_iter = self.segs.drain(..).zip(self.tags.drain(..));
        let (s0, t0) = seg_iter.next().expect("at least one segment");
        segs.push(s0);
        tags.push(t0);
        for (b, (s, t)) in self.breaks.drain(..).zip(seg_iter) {
            if segs.last() == Some(&s) {
                continue;
            }
            breaks.push(b);
            segs.push(s);
            tags.push(t);
        }
        Self { breaks, segs, tags }
    }
}

/// A point strictly inside `(lo, hi)`, either end possibly unbounded.
fn interior_point(lo: Option<&Rational>, hi: Option<&Rational>) -> Rational {
    match (lo, hi) {
        (Some(l), Some(h)) => rational::midpoint(l, h),
        (None, Some(h)) => h - int(1),
        (Some(l), None) => l + int(1),
        (None, None) => Rational::zero(),
    }
}

fn merged_cuts(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => match x.cmp(y) {
                Ordering::Less => {
                    i += 1;
                    x
                }
                Ordering::Greater => {
                    j += 1;
                    y
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    x
                }
            },
            (Some(x), None) => {
                i += 1;
                x
            }
            (None, Some(y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        out.push(next.clone());
    }
    out
}

/// Walks the elementary intervals of the common refinement of `f` and `g`,
/// handing each `(lo, hi, f_index, g_index)` to `visit`.
fn for_each_cell<F>(fb: &[Rational], gb: &[Rational], domain: Option<&Interval>, mut visit: F)
where
    F: FnMut(Option<&Rational>, Option<&Rational>, usize, usize),
{
    let cuts = merged_cuts(fb, gb);
    let (mut fi, mut gi) = (0usize, 0usize);
    for cell in 0..=cuts.len() {
        let lo = if cell == 0 {
            domain.map(|d| &d.lo)
        } else {
            Some(&cuts[cell - 1])
        };
        let hi = if cell == cuts.len() {
            domain.map(|d| &d.hi)
        } else {
            Some(&cuts[cell])
        };
        if let Some(l) = lo {
            while fi < fb.len() && &fb[fi] <= l {
                fi += 1;
            }
            while gi < gb.len() && &gb[gi] <= l {
                gi += 1;
            }
        }
        visit(lo, hi, fi, gi);
    }
}

fn merge_min(f: &Tagged, g: &Tagged, domain: Option<&Interval>) -> Tagged {
    let mut breaks = Vec::new();
    let mut segs: Vec<AffineForm> = Vec::new();
    let mut tags = Vec::new();
    let mut emit = |start: Option<&Rational>, seg: &AffineForm, tag: usize| {
        if let Some(s) = start {
            if !segs.is_empty() {
                breaks.push(s.clone());
            }
        }
        segs.push(seg.clone());
        tags.push(tag);
    };
    for_each_cell(&f.breaks, &g.breaks, domain, |lo, hi, fi, gi| {
        let (fa, ga) = (&f.segs[fi], &g.segs[gi]);
        let pick = |x: &Rational| -> (&AffineForm, usize) {
            if ga.eval(x) < fa.eval(x) {
                (ga, g.tags[gi])
            } else {
                (fa, f.tags[fi])
            }
        };
        if fa == ga {
            emit(lo, fa, f.tags[fi]);
            return;
        }
        let split = fa
            .crossing(ga)
            .filter(|x| lo.is_none_or(|l| l < x) && hi.is_none_or(|h| x < h));
        match split {
            Some(x) => {
                let (left, lt) = pick(&interior_point(lo, Some(&x)));
                emit(lo, left, lt);
                let (right, rt) = pick(&interior_point(Some(&x), hi));
                emit(Some(&x), right, rt);
            }
            None => {
                let (best, t) = pick(&interior_point(lo, hi));
                emit(lo, best, t);
            }
        }
    });
    Tagged { breaks, segs, tags }.canonicalize()
}

fn envelope_tagged(lines: &[(AffineForm, usize)]) -> Tagged {
    match lines.len() {
        0 => unreachable!("caller guarantees a non-empty set"),
        1 => Tagged::single(lines[0].0.clone(), lines[0].1),
        n => {
            let (l, r) = lines.split_at(n / 2);
            merge_min(&envelope_tagged(l), &envelope_tagged(r), None)
        }
    }
}

/// Pointwise minimum of a non-empty set of lines on the whole real line.
///
/// Lines are sorted by decreasing slope and merged divide-and-conquer.
/// Among coinciding lines the one with the smaller input index is kept as
/// the witness.
pub fn lower_envelope_lines(lines: &[AffineForm]) -> Result<LineEnvelope> {
    if lines.is_empty() {
        return Err(Error::InvalidParameter(
            "lower envelope of an empty line set".into(),
        ));
    }
    let mut sorted: Vec<(AffineForm, usize)> = lines.iter().cloned().zip(0..).collect();
    sorted.sort_by(|(a, ia), (b, ib)| {
        b.slope
            .cmp(&a.slope)
            .then_with(|| a.constant.cmp(&b.constant))
            .then(ia.cmp(ib))
    });
    let t = envelope_tagged(&sorted);
    Ok(LineEnvelope {
        function: PwlFunction {
            breakpoints: t.breaks,
            segments: t.segs,
            domain: None,
        },
        witnesses: t.tags,
    })
}

impl PwlFunction {
    pub fn line(f: AffineForm) -> Self {
        Self {
            breakpoints: Vec::new(),
            segments: vec![f],
            domain: None,
        }
    }

    pub fn line_on(f: AffineForm, domain: Option<Interval>) -> Self {
        Self {
            breakpoints: Vec::new(),
            segments: vec![f],
            domain,
        }
    }

    pub fn zero(domain: Option<Interval>) -> Self {
        Self::line_on(AffineForm::zero(), domain)
    }

    /// Builds a function from raw parts, validating order, continuity and
    /// domain containment, then merging identical neighbours.
    pub fn from_parts(
        breakpoints: Vec<Rational>,
        segments: Vec<AffineForm>,
        domain: Option<Interval>,
    ) -> Result<Self> {
        if segments.len() != breakpoints.len() + 1 {
            return Err(Error::Format(format!(
                "{} segments for {} breakpoints",
                segments.len(),
                breakpoints.len()
            )));
        }
        for w in breakpoints.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Format("breakpoints must strictly increase".into()));
            }
        }
        if let Some(d) = &domain {
            if breakpoints.iter().any(|b| b <= &d.lo || b >= &d.hi) {
                return Err(Error::Format("breakpoint outside open domain".into()));
            }
        }
        for (i, b) in breakpoints.iter().enumerate() {
            if segments[i].eval(b) != segments[i + 1].eval(b) {
                return Err(Error::Format(format!(
                    "discontinuity at breakpoint {}",
                    rational::format(b)
                )));
            }
        }
        let n = segments.len();
        let t = Tagged {
            breaks: breakpoints,
            segs: segments,
            tags: vec![0; n],
        }
        .canonicalize();
        Ok(Self {
            breakpoints: t.breaks,
            segments: t.segs,
            domain,
        })
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn segments(&self) -> &[AffineForm] {
        &self.segments
    }

    pub fn domain(&self) -> Option<&Interval> {
        self.domain.as_ref()
    }

    pub fn piece_count(&self) -> usize {
        self.segments.len()
    }

    /// Index of the segment governing `x` (the left one at a breakpoint).
    pub fn segment_index(&self, x: &Rational) -> usize {
        self.breakpoints.partition_point(|b| b < x)
    }

    /// Evaluates the function, extrapolating outer segments past the domain.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.segments[self.segment_index(x)].eval(x)
    }

    /// Closed extent `(lo, hi)` of segment `i`; `None` marks an infinite end.
    pub fn segment_extent(&self, i: usize) -> (Option<&Rational>, Option<&Rational>) {
        let lo = if i == 0 {
            self.domain.as_ref().map(|d| &d.lo)
        } else {
            Some(&self.breakpoints[i - 1])
        };
        let hi = if i + 1 == self.segments.len() {
            self.domain.as_ref().map(|d| &d.hi)
        } else {
            Some(&self.breakpoints[i])
        };
        (lo, hi)
    }

    /// A rational point strictly inside segment `i`.
    pub fn segment_interior_point(&self, i: usize) -> Rational {
        let (lo, hi) = self.segment_extent(i);
        interior_point(lo, hi)
    }

    pub fn is_concave(&self) -> bool {
        self.segments.windows(2).all(|w| w[0].slope > w[1].slope)
    }

    pub fn check_invariants(&self) -> bool {
        let ordered = self.breakpoints.windows(2).all(|w| w[0] < w[1]);
        let continuous = self
            .breakpoints
            .iter()
            .enumerate()
            .all(|(i, b)| self.segments[i].eval(b) == self.segments[i + 1].eval(b));
        let minimal = self.segments.windows(2).all(|w| w[0] != w[1]);
        let inside = self
            .domain
            .as_ref()
            .is_none_or(|d| self.breakpoints.iter().all(|b| &d.lo < b && b < &d.hi));
        ordered
            && continuous
            && minimal
            && inside
            && self.segments.len() == self.breakpoints.len() + 1
    }

    fn tagged(&self) -> Tagged {
        Tagged {
            breaks: self.breakpoints.clone(),
            segs: self.segments.clone(),
            tags: vec![0; self.segments.len()],
        }
    }

    pub fn min(&self, other: &PwlFunction) -> Result<PwlFunction> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch);
        }
        let t = merge_min(&self.tagged(), &other.tagged(), self.domain.as_ref());
        Ok(PwlFunction {
            breakpoints: t.breaks,
            segments: t.segs,
            domain: self.domain.clone(),
        })
    }

    pub fn add(&self, other: &PwlFunction) -> Result<PwlFunction> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch);
        }
        let mut breaks = Vec::new();
        let mut segs = Vec::new();
        for_each_cell(
            &self.breakpoints,
            &other.breakpoints,
            self.domain.as_ref(),
            |lo, _hi, fi, gi| {
                if let Some(l) = lo {
                    if !segs.is_empty() {
                        breaks.push(l.clone());
                    }
                }
                segs.push(&self.segments[fi] + &other.segments[gi]);
            },
        );
        let n = segs.len();
        let t = Tagged {
            breaks,
            segs,
            tags: vec![0; n],
        }
        .canonicalize();
        Ok(PwlFunction {
            breakpoints: t.breaks,
            segments: t.segs,
            domain: self.domain.clone(),
        })
    }

    /// Adds one affine form to every segment.
    pub fn add_affine(&self, f: &AffineForm) -> PwlFunction {
        let segs: Vec<AffineForm> = self.segments.iter().map(|s| s + f).collect();
        PwlFunction {
            breakpoints: self.breakpoints.clone(),
            segments: segs,
            domain: self.domain.clone(),
        }
    }

    pub fn restrict(&self, lo: Rational, hi: Rational) -> Result<PwlFunction> {
        let iv = Interval::new(lo, hi)?;
        if let Some(d) = &self.domain {
            if iv.lo < d.lo || iv.hi > d.hi {
                return Err(Error::OutsideDomain {
                    lo: rational::format(&iv.lo),
                    hi: rational::format(&iv.hi),
                });
            }
        }
        let first = self.breakpoints.partition_point(|b| b <= &iv.lo);
        let last = self.breakpoints.partition_point(|b| b < &iv.hi);
        Ok(PwlFunction {
            breakpoints: self.breakpoints[first..last].to_vec(),
            segments: self.segments[first..=last].to_vec(),
            domain: Some(iv),
        })
    }
}

pub fn pwl_min(f: &PwlFunction, g: &PwlFunction) -> Result<PwlFunction> {
    f.min(g)
}

pub fn pwl_add(f: &PwlFunction, g: &PwlFunction) -> Result<PwlFunction> {
    f.add(g)
}

pub fn pwl_restrict(f: &PwlFunction, lo: Rational, hi: Rational) -> Result<PwlFunction> {
    f.restrict(lo, hi)
}

pub fn piece_count(f: &PwlFunction) -> usize {
    f.piece_count()
}
