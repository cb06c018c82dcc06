//! Near-origin feasibility of linear inequality systems in `eta = -ln x`
//! coordinates, decided by Fourier-Motzkin elimination with multiplier
//! tracking so that every negative answer carries a replayable certificate.

use serde::{Deserialize, Serialize};

const ZERO: f64 = 1e-10;
const TIE: f64 = 1e-9;

/// `coeffs . eta > constant` (or `>=` when not strict).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearRow {
    pub coeffs: Vec<f64>,
    pub constant: f64,
    pub strict: bool,
}

impl LinearRow {
    pub fn strict(coeffs: Vec<f64>, constant: f64) -> Self {
        LinearRow {
            coeffs,
            constant,
            strict: true,
        }
    }

    pub fn eval(&self, eta: &[f64]) -> f64 {
        dot(&self.coeffs, eta)
    }

    pub fn holds(&self, eta: &[f64]) -> bool {
        let lhs = self.eval(eta);
        if self.strict {
            lhs > self.constant
        } else {
            lhs >= self.constant
        }
    }

    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeSystem {
    pub dimension: usize,
    pub rows: Vec<LinearRow>,
}

/// `base + t * ray` satisfies every row and lies in the positive orthant for
/// all sufficiently large `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub ray: Vec<f64>,
    pub base: Vec<f64>,
}

impl Witness {
    pub fn point(&self, t: f64) -> Vec<f64> {
        self.base
            .iter()
            .zip(&self.ray)
            .map(|(b, r)| b + t * r)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    /// The rows themselves are inconsistent: multipliers act on the rows as given.
    Affine,
    /// No direction with all entries positive keeps every row non-decreasing:
    /// multipliers act on `coeffs . d >= 0` followed by `d_i > 0` for each axis.
    Recession,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub multipliers: Vec<f64>,
}

/// Outcome of combining a system with certificate multipliers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Replay {
    /// Largest absolute coefficient of the combined row (should vanish).
    pub residual: f64,
    /// Combined right-hand side.
    pub constant: f64,
    pub strict: bool,
    pub contradiction: bool,
}

impl Certificate {
    fn rows(&self, system: &ConeSystem) -> Vec<LinearRow> {
        match self.kind {
            CertificateKind::Affine => system.rows.clone(),
            CertificateKind::Recession => recession_rows(system),
        }
    }

    /// Combine the rows with the multipliers. A valid certificate yields
    /// `0 > c` with `c >= 0` or `0 >= c` with `c > 0`.
    pub fn replay(&self, system: &ConeSystem) -> Replay {
        let rows = self.rows(system);
        let mut combined = vec![0.0; system.dimension];
        let mut constant = 0.0;
        let mut strict = false;
        let mut scale: f64 = 0.0;
        let mut nonnegative = self.multipliers.len() == rows.len();
        for (lam, row) in self.multipliers.iter().zip(&rows) {
            if *lam < 0.0 {
                nonnegative = false;
            }
            if *lam == 0.0 {
                continue;
            }
            for (c, a) in combined.iter_mut().zip(&row.coeffs) {
                *c += lam * a;
            }
            scale = scale.max(lam * row.coeffs.iter().fold(0.0_f64, |m, a| m.max(a.abs())));
            constant += lam * row.constant;
            strict |= row.strict;
        }
        let scale = scale.max(f64::MIN_POSITIVE);
        let residual = combined.iter().fold(0.0_f64, |m, a| m.max(a.abs())) / scale;
        let c = constant / scale;
        let contradiction = nonnegative
            && residual <= 1e-7
            && ((strict && c >= -TIE) || (!strict && c > TIE));
        Replay {
            residual,
            constant: c,
            strict,
            contradiction,
        }
    }

    pub fn is_valid(&self, system: &ConeSystem) -> bool {
        self.replay(system).contradiction
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityVerdict {
    pub intersects_near_origin: bool,
    pub witness: Option<Witness>,
    pub certificate: Option<Certificate>,
}

impl FeasibilityVerdict {
    fn yes(w: Witness) -> Self {
        FeasibilityVerdict {
            intersects_near_origin: true,
            witness: Some(w),
            certificate: None,
        }
    }

    fn no(c: Certificate) -> Self {
        FeasibilityVerdict {
            intersects_near_origin: false,
            witness: None,
            certificate: Some(c),
        }
    }
}

fn recession_rows(system: &ConeSystem) -> Vec<LinearRow> {
    let mut rows: Vec<LinearRow> = system
        .rows
        .iter()
        .map(|r| LinearRow {
            coeffs: r.coeffs.clone(),
            constant: 0.0,
            strict: false,
        })
        .collect();
    rows.extend(positivity(system.dimension));
    rows
}

fn positivity(n: usize) -> Vec<LinearRow> {
    (0..n)
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            LinearRow::strict(e, 0.0)
        })
        .collect()
}

/// Decide whether the region cut out by `system` meets every neighbourhood
/// `{eta_i > T}`, i.e. every ball around the origin in `x = exp(-eta)`.
///
/// When the strict homogeneous system is feasible its solution is a ray.
/// Otherwise the region is non-empty near the origin exactly when the rows are
/// jointly satisfiable and some positive direction keeps every row
/// non-decreasing; a failure of either part comes with a certificate.
pub fn decide(system: &ConeSystem) -> FeasibilityVerdict {
    let n = system.dimension;
    if n == 0 {
        return if system.rows.iter().all(|r| r.holds(&[])) {
            FeasibilityVerdict::yes(Witness {
                ray: vec![],
                base: vec![],
            })
        } else {
            let multipliers = system
                .rows
                .iter()
                .map(|r| if r.holds(&[]) { 0.0 } else { 1.0 })
                .collect::<Vec<_>>();
            let mut first = vec![0.0; multipliers.len()];
            if let Some(i) = multipliers.iter().position(|m| *m > 0.0) {
                first[i] = 1.0;
            }
            FeasibilityVerdict::no(Certificate {
                kind: CertificateKind::Affine,
                multipliers: first,
            })
        };
    }

    let mut homogeneous: Vec<LinearRow> = system
        .rows
        .iter()
        .map(|r| LinearRow::strict(r.coeffs.clone(), 0.0))
        .collect();
    homogeneous.extend(positivity(n));
    if let Ok(d) = solve(n, &homogeneous) {
        let ray = normalize_ray(d);
        return FeasibilityVerdict::yes(Witness {
            ray,
            base: vec![0.0; n],
        });
    }

    let recession = recession_rows(system);
    let d = match solve(n, &recession) {
        Ok(d) => normalize_ray(d),
        Err(multipliers) => {
            return FeasibilityVerdict::no(Certificate {
                kind: CertificateKind::Recession,
                multipliers,
            })
        }
    };
    match solve(n, &system.rows) {
        Ok(base) => FeasibilityVerdict::yes(Witness { ray: d, base }),
        Err(multipliers) => FeasibilityVerdict::no(Certificate {
            kind: CertificateKind::Affine,
            multipliers,
        }),
    }
}

fn normalize_ray(d: Vec<f64>) -> Vec<f64> {
    let m = d.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if m > 0.0 {
        d.into_iter().map(|v| v / m).collect()
    } else {
        d
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone)]
struct Tracked {
    a: Vec<f64>,
    c: f64,
    strict: bool,
    hist: Vec<f64>,
}

impl Tracked {
    fn normalize(&mut self) {
        let m = self.a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if m <= ZERO {
            for v in self.a.iter_mut() {
                *v = 0.0;
            }
            let h = self.hist.iter().fold(0.0_f64, |m, v| m.max(*v));
            if h > 0.0 {
                self.c /= h;
                for v in self.hist.iter_mut() {
                    *v /= h;
                }
            }
            return;
        }
        for v in self.a.iter_mut() {
            *v /= m;
            if v.abs() <= ZERO {
                *v = 0.0;
            }
        }
        self.c /= m;
        for v in self.hist.iter_mut() {
            *v /= m;
        }
    }

    fn is_trivial(&self) -> bool {
        self.a.iter().all(|v| *v == 0.0)
    }

    fn contradicts(&self) -> bool {
        if self.strict {
            self.c >= -TIE
        } else {
            self.c > TIE
        }
    }

    fn support(&self) -> usize {
        let m = self.hist.iter().fold(0.0_f64, |m, v| m.max(*v));
        self.hist.iter().filter(|v| **v > m * 1e-12).count()
    }
}

/// Fourier-Motzkin elimination. Returns a point satisfying every row, or the
/// multipliers of a contradictory combination.
fn solve(n: usize, rows: &[LinearRow]) -> Result<Vec<f64>, Vec<f64>> {
    let m = rows.len();
    let mut current: Vec<Tracked> = Vec::with_capacity(m);
    for (i, r) in rows.iter().enumerate() {
        let mut hist = vec![0.0; m];
        hist[i] = 1.0;
        let mut t = Tracked {
            a: r.coeffs.clone(),
            c: r.constant,
            strict: r.strict,
            hist,
        };
        t.normalize();
        current.push(t);
    }

    let mut stages: Vec<(usize, Vec<Tracked>)> = Vec::new();
    let mut eliminated = vec![false; n];
    loop {
        let mut kept = Vec::with_capacity(current.len());
        for t in current.drain(..) {
            if t.is_trivial() {
                if t.contradicts() {
                    return Err(t.hist);
                }
            } else {
                kept.push(t);
            }
        }
        current = dedupe(kept);

        let Some(var) = pick_variable(&current, &eliminated) else {
            break;
        };
        eliminated[var] = true;
        let done = eliminated.iter().filter(|e| **e).count();

        let (with, rest): (Vec<Tracked>, Vec<Tracked>) =
            current.drain(..).partition(|t| t.a[var] != 0.0);
        let (pos, neg): (Vec<&Tracked>, Vec<&Tracked>) = with.iter().partition(|t| t.a[var] > 0.0);
        let mut next = rest;
        for p in &pos {
            for q in &neg {
                let (wp, wq) = (-q.a[var], p.a[var]);
                let mut t = Tracked {
                    a: p.a.iter().zip(&q.a).map(|(x, y)| wp * x + wq * y).collect(),
                    c: wp * p.c + wq * q.c,
                    strict: p.strict || q.strict,
                    hist: p.hist.iter().zip(&q.hist).map(|(x, y)| wp * x + wq * y).collect(),
                };
                t.a[var] = 0.0;
                t.normalize();
                if t.support() > done + 1 {
                    continue;
                }
                next.push(t);
            }
        }
        stages.push((var, with));
        current = next;
    }

    let mut x = vec![1.0; n];
    for (var, rows) in stages.iter().rev() {
        let mut lo: Option<f64> = None;
        let mut hi: Option<f64> = None;
        for t in rows {
            let rest: f64 = t
                .a
                .iter()
                .enumerate()
                .filter(|(i, _)| i != var)
                .map(|(i, a)| a * x[i])
                .sum();
            let bound = (t.c - rest) / t.a[*var];
            if t.a[*var] > 0.0 {
                lo = Some(lo.map_or(bound, |l: f64| l.max(bound)));
            } else {
                hi = Some(hi.map_or(bound, |h: f64| h.min(bound)));
            }
        }
        x[*var] = match (lo, hi) {
            (Some(l), Some(h)) => 0.5 * (l + h),
            (Some(l), None) => l + 1.0_f64.max(l.abs()),
            (None, Some(h)) => h - 1.0_f64.max(h.abs()),
            (None, None) => 1.0,
        };
    }
    Ok(x)
}

fn pick_variable(rows: &[Tracked], eliminated: &[bool]) -> Option<usize> {
    let mut best: Option<(i64, usize)> = None;
    for v in 0..eliminated.len() {
        if eliminated[v] {
            continue;
        }
        let p = rows.iter().filter(|t| t.a[v] > 0.0).count() as i64;
        let q = rows.iter().filter(|t| t.a[v] < 0.0).count() as i64;
        if p + q == 0 {
            continue;
        }
        let growth = p * q - p - q;
        if best.map_or(true, |(g, _)| growth < g) {
            best = Some((growth, v));
        }
    }
    best.map(|(_, v)| v)
}

/// Drop parallel rows, keeping the tightest of each direction.
fn dedupe(rows: Vec<Tracked>) -> Vec<Tracked> {
    let mut out: Vec<Tracked> = Vec::with_capacity(rows.len());
    'outer: for t in rows {
        for o in out.iter_mut() {
            if o.a.iter().zip(&t.a).all(|(x, y)| (x - y).abs() <= 1e-12) {
                let tighter = t.c > o.c + TIE || ((t.c - o.c).abs() <= TIE && t.strict && !o.strict);
                if tighter {
                    *o = t;
                }
                continue 'outer;
            }
        }
        out.push(t);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(n: usize, rows: Vec<(Vec<f64>, f64)>) -> ConeSystem {
        ConeSystem {
            dimension: n,
            rows: rows
                .into_iter()
                .map(|(a, c)| LinearRow::strict(a, c))
                .collect(),
        }
    }

    #[test]
    fn single_row_is_feasible_with_ray() {
        let s = sys(2, vec![(vec![1.0, -2.0], 0.0)]);
        let v = decide(&s);
        assert!(v.intersects_near_origin);
        let w = v.witness.unwrap();
        assert!(s.rows[0].holds(&w.point(1.0)));
        assert!(w.ray.iter().all(|r| *r > 0.0));
    }

    #[test]
    fn opposed_pair_is_empty_with_certificate() {
        // eta1 > 2 eta2 and eta2 > 2 eta1
        let s = sys(2, vec![(vec![1.0, -2.0], 0.0), (vec![-2.0, 1.0], 0.0)]);
        let v = decide(&s);
        assert!(!v.intersects_near_origin);
        assert!(v.certificate.unwrap().is_valid(&s));
    }

    #[test]
    fn identical_boundary_opposite_sides_is_empty() {
        let s = sys(2, vec![(vec![1.0, -2.0], 0.3), (vec![-1.0, 2.0], -0.3)]);
        let v = decide(&s);
        assert!(!v.intersects_near_origin);
        assert!(v.certificate.unwrap().is_valid(&s));
    }

    #[test]
    fn equal_exponents_nested_uses_constants() {
        // eta1 - 2 eta2 > 0.5 and eta1 - 2 eta2 < 0.7: a thin band that persists
        let s = sys(2, vec![(vec![1.0, -2.0], 0.5), (vec![-1.0, 2.0], -0.7)]);
        let v = decide(&s);
        assert!(v.intersects_near_origin);
        let w = v.witness.unwrap();
        let far = w.point(1e4);
        assert!(s.rows.iter().all(|r| r.holds(&far)));
        assert!(far.iter().all(|x| *x > 1e3));
        // reversed band is empty
        let s = sys(2, vec![(vec![1.0, -2.0], 0.7), (vec![-1.0, 2.0], -0.5)]);
        let v = decide(&s);
        assert!(!v.intersects_near_origin);
        assert!(v.certificate.unwrap().is_valid(&s));
    }

    #[test]
    fn no_positive_direction_gives_recession_certificate() {
        // eta1 + eta2 < 5 admits points but no positive recession direction
        let s = sys(2, vec![(vec![-1.0, -1.0], -5.0)]);
        let v = decide(&s);
        assert!(!v.intersects_near_origin);
        let c = v.certificate.unwrap();
        assert_eq!(c.kind, CertificateKind::Recession);
        assert!(c.is_valid(&s));
    }

    #[test]
    fn empty_system_is_feasible() {
        let v = decide(&sys(3, vec![]));
        assert!(v.intersects_near_origin);
    }
}
