//! Assembly of the lexicographic and part-wise families into a realiser of
//! `M^{n,v}_{[k,ℓ]}`, with the size bound it must respect.

use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use super::good::{good_function_condition, sample_good_function, ConditionValue, GoodFunction, GoodParams};
use super::l1::{build_l1, l1_size_bound, L1Family, Verification};
use super::l2::{build_l2_unweighted, build_l2_weighted, l2_params};
use super::order::ExtensionFamily;
use super::{derive_seed, enumerate_poset, Size, SizeReport, WeightKind, WeightVector};
use crate::poset::{is_realiser, Realiser, RealiserVerdict};
use crate::{Caps, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Unit weights and integer `k, ℓ`: `r = ℓ − k`, bound `34(ℓ−k)² log n`.
    Unweighted,
    /// General weights: `r` from `m(v, r) >= 2(ℓ−k)`, bound `43 r² log n`.
    Weighted,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct L1Summary {
    pub size: usize,
    pub size_bound: u64,
    pub y_size: usize,
    pub rotations: bool,
    pub rounds: u32,
    pub verification: Verification,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct L2Summary {
    pub params: GoodParams,
    pub condition: ConditionValue,
    pub rounds: u32,
    pub verification: Verification,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyReport {
    pub route: Route,
    pub n: usize,
    pub r: usize,
    /// No `r <= n` satisfied `m(v, r) >= 2(ℓ − k)`.
    pub r_capped: bool,
    pub l1: L1Summary,
    pub l2: Option<L2Summary>,
    pub l2_skipped: Option<String>,
    pub total: usize,
    pub theorem_bound: f64,
    /// Family size the construction can reach once `⌈3r⌉`, `⌈3 log n⌉` and
    /// `⌈(3r+1)² log n⌉` are rounded up.
    pub ceiling_bound: u64,
    pub allowed: u64,
    pub within_theorem_bound: bool,
    pub within_bound: bool,
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub struct FamilyBuild {
    pub family: ExtensionFamily,
    pub l1: L1Family,
    pub good: Option<GoodFunction>,
    pub report: FamilyReport,
}

fn integer_bounds(w: &WeightVector, k: &Size, l: &Size) -> Option<(u64, u64)> {
    if w.kind() != WeightKind::Ones {
        return None;
    }
    match (k, l) {
        (Size::Linear(k), Size::Linear(l)) if k.is_integer() && l.is_integer() => {
            Some((k.to_integer().to_u64()?, l.to_integer().to_u64()?))
        }
        _ => None,
    }
}

fn check_interval(w: &WeightVector, k: &Size, l: &Size) -> Result<()> {
    if w.is_empty() {
        return Err(Error::precondition("need n >= 1"));
    }
    let nonneg = match (k, l, w.is_log_domain()) {
        (Size::Linear(k), Size::Linear(_), false) => !k.is_negative(),
        (Size::Log(k), Size::Log(_), true) => k >= &num_rational::BigRational::one(),
        _ => return Err(Error::precondition("k, l not in the weight domain")),
    };
    if !nonneg {
        return Err(Error::precondition("need k >= 0"));
    }
    if k >= l {
        return Err(Error::precondition(format!("need k < l (k = {k}, l = {l})")));
    }
    Ok(())
}

/// The `L1 ∪ L2` comparator family for width `ℓ − k` over weights `w`.
pub fn build_family(w: &WeightVector, k: &Size, l: &Size, seed: u64, caps: &Caps) -> Result<FamilyBuild> {
    check_interval(w, k, l)?;
    let n = w.len();
    let ln_n = (n as f64).ln();
    let integer = integer_bounds(w, k, l);
    let (route, r, r_capped) = match integer {
        Some((k, l)) => (Route::Unweighted, (l - k) as usize, false),
        None => {
            let (r, capped) = w.effective_r(k, l);
            (Route::Weighted, r, capped)
        }
    };
    let l1 = build_l1(n, r as f64, derive_seed(seed, 1), caps)?;
    let mut family = l1.family(w);
    let params = l2_params(n, r);
    let copies = if route == Route::Unweighted { 2 } else { 3 };
    let (good, l2, l2_skipped) = if params.b > n || params.t == 0 {
        (
            None,
            None,
            Some(format!("b = {} exceeds n = {n}; lexicographic family suffices", params.b)),
        )
    } else {
        let condition = good_function_condition(params)?;
        let f = sample_good_function(params, derive_seed(seed, 2), caps)?;
        let fam = match integer {
            Some((k, l)) => build_l2_unweighted(n, k, l, &f)?,
            None => build_l2_weighted(w, k, l, r, &f)?,
        };
        let summary = L2Summary {
            params,
            condition,
            rounds: f.rounds,
            verification: f.verification.clone(),
            size: fam.len(),
        };
        family.extend(fam);
        (Some(f), Some(summary), None)
    };
    let theorem_bound = match route {
        Route::Unweighted => 34.0 * (r as f64).powi(2) * ln_n,
        Route::Weighted => 43.0 * (r as f64).powi(2) * ln_n,
    };
    let l2_ceiling = if l2.is_some() {
        (copies * params.a * params.t) as u64
    } else {
        0
    };
    let ceiling_bound = l1_size_bound(n, r as f64) + l2_ceiling;
    let allowed = ((theorem_bound - 1e-9).ceil().max(0.0) as u64)
        .max(ceiling_bound)
        .max(1);
    let total = family.len();
    let verified = l1.verification.is_verified()
        && l2.as_ref().is_none_or(|s| s.verification.is_verified());
    let report = FamilyReport {
        route,
        n,
        r,
        r_capped,
        l1: L1Summary {
            size: l1.len(),
            size_bound: l1.size_bound,
            y_size: l1.y_size,
            rotations: l1.rotations,
            rounds: l1.rounds,
            verification: l1.verification.clone(),
        },
        l2,
        l2_skipped,
        total,
        theorem_bound,
        ceiling_bound,
        allowed,
        within_theorem_bound: total as f64 <= theorem_bound,
        within_bound: total as u64 <= allowed,
        verified,
    };
    Ok(FamilyBuild {
        family,
        l1,
        good,
        report,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultisetRealiserReport {
    pub n: usize,
    pub weights: String,
    pub k: SizeReport,
    pub l: SizeReport,
    pub family: FamilyReport,
    pub elements: Option<usize>,
    pub certified: Option<bool>,
    pub witness: Option<(String, String)>,
    pub certification_skipped: Option<String>,
}

#[derive(Clone, Debug)]
pub struct MultisetRealiserOutput {
    pub report: MultisetRealiserReport,
    pub build: FamilyBuild,
    /// Present when the poset was small enough to enumerate.
    pub realiser: Option<Realiser>,
}

/// Builds the family and, when `M^{n,v}_{[k,ℓ]}` can be enumerated within
/// the caps, restricts it to the poset and certifies it with `is_realiser`.
pub fn build_realiser_multiset(
    w: &WeightVector,
    k: &Size,
    l: &Size,
    seed: u64,
    caps: &Caps,
) -> Result<MultisetRealiserOutput> {
    let build = build_family(w, k, l, seed, caps)?;
    let mut report = MultisetRealiserReport {
        n: w.len(),
        weights: w.label(),
        k: k.report(),
        l: l.report(),
        family: build.report.clone(),
        elements: None,
        certified: None,
        witness: None,
        certification_skipped: None,
    };
    let realiser = match enumerate_poset(w, k, l, caps) {
        Ok(mp) => {
            report.elements = Some(mp.elements.len());
            let extensions = build.family.linear_extensions(&mp.elements);
            match is_realiser(&mp.poset, &extensions)? {
                RealiserVerdict::Realiser => report.certified = Some(true),
                RealiserVerdict::Unreversed { x, y } => {
                    report.certified = Some(false);
                    report.witness = Some((x.to_string(), y.to_string()));
                }
            }
            Some(Realiser { extensions })
        }
        Err(Error::CapExceeded { what, size, cap }) => {
            report.certification_skipped = Some(format!("{what} exceeds cap: {size} > {cap}"));
            None
        }
        Err(e) => return Err(e),
    };
    Ok(MultisetRealiserOutput {
        report,
        build,
        realiser,
    })
}
