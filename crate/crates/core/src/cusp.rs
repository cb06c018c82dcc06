//! Thin and thick power regions `a x_i < x_j^alpha` near the origin of the
//! positive orthant, their log-linearization and the intersection decision.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cone::{self, ConeSystem, FeasibilityVerdict, LinearRow};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `a x_i < x_j^alpha`
    Thin,
    /// `a x_i > x_j^alpha`
    Thick,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Thin => Orientation::Thick,
            Orientation::Thick => Orientation::Thin,
        }
    }
}

/// Indices are 1-based, matching the usual `V_ij` notation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerRegion {
    pub i: usize,
    pub j: usize,
    pub a: f64,
    pub alpha: f64,
    pub orientation: Orientation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
}

impl PowerRegion {
    pub fn thin(i: usize, j: usize, a: f64, alpha: f64) -> Self {
        PowerRegion {
            i,
            j,
            a,
            alpha,
            orientation: Orientation::Thin,
            dimension: None,
        }
    }

    pub fn thick(i: usize, j: usize, a: f64, alpha: f64) -> Self {
        PowerRegion {
            orientation: Orientation::Thick,
            ..Self::thin(i, j, a, alpha)
        }
    }

    pub fn in_dimension(mut self, n: usize) -> Self {
        self.dimension = Some(n);
        self
    }

    pub fn with_orientation(mut self, o: Orientation) -> Self {
        self.orientation = o;
        self
    }

    /// Thin cusps proper need `alpha > 1`; smaller exponents are generalized regions.
    pub fn is_generalized(&self) -> bool {
        self.alpha <= 1.0
    }

    /// Membership of a point `x` (0-based slice) in the region.
    pub fn contains(&self, x: &[f64]) -> bool {
        let lhs = self.a * x[self.i - 1];
        let rhs = x[self.j - 1].powf(self.alpha);
        match self.orientation {
            Orientation::Thin => lhs < rhs,
            Orientation::Thick => lhs > rhs,
        }
    }

    /// Same boundary hypersurface `S_ij(a, alpha)`.
    pub fn same_surface(&self, other: &PowerRegion) -> bool {
        self.i == other.i && self.j == other.j && self.a == other.a && self.alpha == other.alpha
    }

    fn validate(&self) -> Result<()> {
        if self.i == self.j {
            return Err(Error::SameIndex(self.i));
        }
        if self.i == 0 || self.j == 0 {
            return Err(Error::Invalid("region indices are 1-based".into()));
        }
        if !(self.a > 0.0) || !(self.alpha > 0.0) || !self.a.is_finite() || !self.alpha.is_finite()
        {
            return Err(Error::Invalid(format!(
                "region V_{}{} needs a > 0 and alpha > 0",
                self.i, self.j
            )));
        }
        Ok(())
    }
}

/// Common ambient dimension of a region list: the declared one, or the
/// largest index used.
pub fn common_dimension(regions: &[PowerRegion]) -> Result<usize> {
    let mut declared: Option<usize> = None;
    for r in regions {
        if let Some(d) = r.dimension {
            match declared {
                Some(e) if e != d => return Err(Error::DimensionMismatch { expected: e, got: d }),
                _ => declared = Some(d),
            }
        }
    }
    let used = regions.iter().map(|r| r.i.max(r.j)).max().unwrap_or(0);
    match declared {
        Some(d) if used > d => Err(Error::DimensionMismatch {
            expected: d,
            got: used,
        }),
        Some(d) => Ok(d),
        None => Ok(used),
    }
}

/// thin `a x_i < x_j^alpha` becomes `eta_i - alpha eta_j > ln a`; thick reverses it.
pub fn to_log_system(regions: &[PowerRegion]) -> Result<ConeSystem> {
    for r in regions {
        r.validate()?;
    }
    let n = common_dimension(regions)?;
    let rows = regions
        .iter()
        .map(|r| {
            let mut coeffs = vec![0.0; n];
            coeffs[r.i - 1] = 1.0;
            coeffs[r.j - 1] = -r.alpha;
            let c = r.a.ln();
            match r.orientation {
                Orientation::Thin => LinearRow::strict(coeffs, c),
                Orientation::Thick => {
                    LinearRow::strict(coeffs.into_iter().map(|v| -v).collect(), -c)
                }
            }
        })
        .collect();
    Ok(ConeSystem { dimension: n, rows })
}

/// Whether the regions have a common point in every neighbourhood of the origin.
pub fn intersects_near_origin(regions: &[PowerRegion]) -> Result<FeasibilityVerdict> {
    if regions.is_empty() {
        return Err(Error::Invalid("empty region list".into()));
    }
    Ok(cone::decide(&to_log_system(regions)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule", content = "empty")]
pub enum PairwiseRule {
    AlwaysIntersect,
    /// Orientation pairs (first region, second region) whose intersection is empty.
    SomePairEmpty(Vec<(Orientation, Orientation)>),
}

const EXP_TIE: f64 = 1e-12;

/// Closed-form two-region rule. Orientations of the inputs are ignored; the
/// answer covers all four thin/thick combinations of the two hypersurfaces.
pub fn pairwise_rule(r1: &PowerRegion, r2: &PowerRegion) -> PairwiseRule {
    use Orientation::{Thick, Thin};
    let mut empty = Vec::new();
    if r1.i == r2.i && r1.j == r2.j {
        let d = r1.alpha - r2.alpha;
        if d.abs() <= EXP_TIE * r1.alpha.max(r2.alpha) {
            // identical exponents: the coefficients order the two boundaries
            if r1.a >= r2.a {
                empty.push((Thin, Thick));
            }
            if r2.a >= r1.a {
                empty.push((Thick, Thin));
            }
        } else if d > 0.0 {
            empty.push((Thin, Thick));
        } else {
            empty.push((Thick, Thin));
        }
    } else if r1.i == r2.j && r1.j == r2.i {
        let prod = r1.alpha * r2.alpha;
        if (prod - 1.0).abs() <= EXP_TIE {
            let s = r1.a.ln() + r1.alpha * r2.a.ln();
            if s >= -EXP_TIE {
                empty.push((Thin, Thin));
            }
            if s <= EXP_TIE {
                empty.push((Thick, Thick));
            }
        } else if prod > 1.0 {
            empty.push((Thin, Thin));
        } else {
            empty.push((Thick, Thick));
        }
    }
    if empty.is_empty() {
        PairwiseRule::AlwaysIntersect
    } else {
        PairwiseRule::SomePairEmpty(empty)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum SampleOutcome {
    EmpiricallyNonempty { hits: usize, count: usize, fraction: f64 },
    NoHit { count: usize },
}

impl SampleOutcome {
    pub fn nonempty(&self) -> bool {
        matches!(self, SampleOutcome::EmpiricallyNonempty { .. })
    }
}

/// Largest `eta` sampled: deep enough to expose asymptotic behaviour while
/// keeping `x^alpha` representable.
fn eta_ceiling(delta: f64, alpha_max: f64) -> f64 {
    let lo = -delta.ln();
    (30.0 * lo).min(700.0 / alpha_max.max(1.0)).max(lo * 1.5)
}

/// Sample the box `(0, delta)^N` uniformly in `eta = -ln x` and count points
/// inside every region. Membership is tested in the original coordinates.
pub fn sample_oracle(
    regions: &[PowerRegion],
    delta: f64,
    count: usize,
    seed: u64,
) -> Result<SampleOutcome> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Invalid(format!("delta must lie in (0, 1), got {delta}")));
    }
    if count == 0 {
        return Err(Error::Invalid("sample count must be positive".into()));
    }
    if regions.is_empty() {
        return Ok(SampleOutcome::EmpiricallyNonempty {
            hits: count,
            count,
            fraction: 1.0,
        });
    }
    for r in regions {
        r.validate()?;
    }
    let n = common_dimension(regions)?;
    let alpha_max = regions.iter().map(|r| r.alpha).fold(1.0, f64::max);
    let lo = -delta.ln();
    let hi = eta_ceiling(delta, alpha_max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // coordinates outside every region do not affect membership
    let mut used: Vec<usize> = regions.iter().flat_map(|r| [r.i - 1, r.j - 1]).collect();
    used.sort_unstable();
    used.dedup();
    let mut x = vec![delta / 2.0; n];
    let mut hits = 0;
    for _ in 0..count {
        for &k in &used {
            x[k] = (-rng.gen_range(lo..hi)).exp();
        }
        if regions.iter().all(|r| r.contains(&x)) {
            hits += 1;
        }
    }
    Ok(if hits > 0 {
        SampleOutcome::EmpiricallyNonempty {
            hits,
            count,
            fraction: hits as f64 / count as f64,
        }
    } else {
        SampleOutcome::NoHit { count }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountGuarantee {
    pub hypersurfaces: usize,
    pub dimension: usize,
    /// `1 + N(N-1)/2`: beyond this two hypersurfaces share a coordinate pair.
    pub pair_bound: usize,
    pub bound_exceeded: bool,
    /// At least `N` hypersurfaces: some thin/thick combination is empty.
    pub all_to_all_impossible: bool,
}

/// Counting guarantees for distinct boundary hypersurfaces.
pub fn count_guarantee(regions: &[PowerRegion], dimension: usize) -> CountGuarantee {
    let mut surfaces: Vec<&PowerRegion> = Vec::new();
    for r in regions {
        if !surfaces.iter().any(|s| s.same_surface(r)) {
            surfaces.push(r);
        }
    }
    let m = surfaces.len();
    let pair_bound = 1 + dimension * dimension.saturating_sub(1) / 2;
    CountGuarantee {
        hypersurfaces: m,
        dimension,
        pair_bound,
        bound_exceeded: m >= pair_bound,
        all_to_all_impossible: dimension >= 2 && m >= dimension,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllToAll {
    pub holds: bool,
    /// First orientation assignment (in binary counting order) whose
    /// intersection is empty near the origin, with its verdict.
    pub empty_combination: Option<(Vec<Orientation>, FeasibilityVerdict)>,
}

/// Check whether every thin/thick assignment of the given hypersurfaces
/// intersects near the origin.
pub fn all_to_all(regions: &[PowerRegion]) -> Result<AllToAll> {
    if regions.len() > 20 {
        return Err(Error::Invalid("too many hypersurfaces for exhaustive check".into()));
    }
    let m = regions.len();
    for mask in 0u32..(1u32 << m) {
        let combo: Vec<PowerRegion> = regions
            .iter()
            .enumerate()
            .map(|(k, r)| {
                let o = if mask & (1 << k) == 0 {
                    Orientation::Thin
                } else {
                    Orientation::Thick
                };
                r.with_orientation(o)
            })
            .collect();
        let v = intersects_near_origin(&combo)?;
        if !v.intersects_near_origin {
            let orient = combo.iter().map(|r| r.orientation).collect();
            return Ok(AllToAll {
                holds: false,
                empty_combination: Some((orient, v)),
            });
        }
    }
    Ok(AllToAll {
        holds: true,
        empty_combination: None,
    })
}

/// Cyclic chain of thin cusps `V_{s1 s2}, V_{s2 s3}, ..., V_{sN s1}` over a
/// permutation `s` of `1..=N`, with exponents above one.
pub fn cyclic_thin_family<R: Rng>(n: usize, rng: &mut R) -> Vec<PowerRegion> {
    let mut perm: Vec<usize> = (1..=n).collect();
    for k in (1..n).rev() {
        let s = rng.gen_range(0..=k);
        perm.swap(k, s);
    }
    (0..n)
        .map(|k| {
            PowerRegion::thin(
                perm[k],
                perm[(k + 1) % n],
                rng.gen_range(0.5..2.0),
                rng.gen_range(1.05..3.0),
            )
            .in_dimension(n)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum CuspDoc {
    List(Vec<PowerRegion>),
    Sized {
        dimension: usize,
        regions: Vec<PowerRegion>,
    },
}

/// Parse a cusp-list document: either a bare list of regions or
/// `{"dimension": N, "regions": [...]}`.
pub fn load_cusps(document: &str) -> Result<Vec<PowerRegion>> {
    let doc: CuspDoc = serde_json::from_str(document)?;
    let regions = match doc {
        CuspDoc::List(r) => r,
        CuspDoc::Sized { dimension, regions } => regions
            .into_iter()
            .map(|r| {
                if r.dimension.is_some_and(|d| d != dimension) {
                    Err(Error::DimensionMismatch {
                        expected: dimension,
                        got: r.dimension.unwrap(),
                    })
                } else {
                    Ok(r.in_dimension(dimension))
                }
            })
            .collect::<Result<_>>()?,
    };
    for r in &regions {
        r.validate()?;
    }
    common_dimension(&regions)?;
    Ok(regions)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thin_log_row() {
        let s = to_log_system(&[PowerRegion::thin(3, 2, 1.0, 2.0)]).unwrap();
        assert_eq!(s.dimension, 3);
        assert_eq!(s.rows[0].coeffs, vec![0.0, -2.0, 1.0]);
        assert_eq!(s.rows[0].constant, 0.0);
    }

    #[test]
    fn thick_log_row_flips() {
        let s = to_log_system(&[PowerRegion::thick(2, 1, 2.0, 1.5)]).unwrap();
        assert_eq!(s.rows[0].coeffs, vec![1.5, -1.0]);
        assert!((s.rows[0].constant + 2.0_f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn mismatched_dimensions_error() {
        let r = [
            PowerRegion::thin(1, 2, 1.0, 2.0).in_dimension(3),
            PowerRegion::thin(1, 2, 1.0, 2.0).in_dimension(4),
        ];
        assert!(matches!(
            to_log_system(&r),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn same_index_errors() {
        assert!(matches!(
            to_log_system(&[PowerRegion::thin(2, 2, 1.0, 2.0)]),
            Err(Error::SameIndex(2))
        ));
    }

    #[test]
    fn empty_list_oracle_is_full() {
        let o = sample_oracle(&[], 0.01, 10, 1).unwrap();
        assert_eq!(
            o,
            SampleOutcome::EmpiricallyNonempty {
                hits: 10,
                count: 10,
                fraction: 1.0
            }
        );
    }

    #[test]
    fn opposed_tie_uses_coefficients() {
        // S_12(a, 2) and S_21(b, 1/2) coincide when ln a + 2 ln b = 0
        let r1 = PowerRegion::thin(1, 2, 4.0, 2.0);
        let r2 = PowerRegion::thin(2, 1, 0.5, 0.5);
        match pairwise_rule(&r1, &r2) {
            PairwiseRule::SomePairEmpty(v) => assert_eq!(v.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn count_guarantee_pigeonhole() {
        let r: Vec<PowerRegion> = (0..4)
            .map(|k| PowerRegion::thin(1, 2, 1.0 + k as f64, 2.0))
            .collect();
        let g = count_guarantee(&r, 3);
        assert_eq!(g.pair_bound, 4);
        assert!(g.bound_exceeded);
        let g = count_guarantee(&r[..1], 2);
        assert!(!g.bound_exceeded);
        assert!(!g.all_to_all_impossible);
    }
}
