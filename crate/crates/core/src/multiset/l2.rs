//! Part-wise size families: one comparator per part `R_{α,τ}` of each
//! partition induced by a good function, and per tie-break variant `j`.

use super::good::{GoodFunction, GoodParams};
use super::l1::y_size;
use super::order::{Comparator, ExtensionFamily, Provenance};
use super::{Size, WeightVector};
use crate::{Error, Result};

const SPOT_CHECK_SAMPLES: usize = 200;
const SPOT_CHECK_SEED: u64 = 0x5eed;

/// `⌈3 log n⌉`.
pub fn t_param(n: usize) -> usize {
    if n <= 1 {
        return 0;
    }
    (3.0 * (n as f64).ln() - 1e-9).ceil() as usize
}

/// Good-function parameters `a = b = ⌈3r⌉`, `t = ⌈3 log n⌉`.
pub fn l2_params(n: usize, r: usize) -> GoodParams {
    let b = y_size(r as f64);
    GoodParams {
        a: b,
        b,
        r,
        t: t_param(n),
        n,
    }
}

fn check_params(w: &WeightVector, r: usize, f: &GoodFunction) -> Result<()> {
    let want = l2_params(w.len(), r);
    if f.params != want {
        return Err(Error::precondition(format!(
            "good function parameters {:?} differ from {:?}",
            f.params, want
        )));
    }
    Ok(())
}

fn spot_check(fam: ExtensionFamily) -> Result<ExtensionFamily> {
    match fam.spot_check(SPOT_CHECK_SAMPLES, 3, SPOT_CHECK_SEED) {
        None => Ok(fam),
        Some((i, s, t)) => Err(Error::NotAnExtension(format!(
            "comparator {:?} puts {s} above {t}",
            fam.members[i].provenance
        ))),
    }
}

/// The `2at` comparators `L_{α,τ,j}`, `j ∈ {1,2}`: by `|S_{α,τ}|`, ties by
/// `M_1` or `M_2` on the part, then `M_0`.
pub fn build_l2_unweighted(n: usize, k: u64, l: u64, f: &GoodFunction) -> Result<ExtensionFamily> {
    if k >= l {
        return Err(Error::precondition("need k < l"));
    }
    let w = WeightVector::ones(n);
    check_params(&w, (l - k) as usize, f)?;
    let mut fam = ExtensionFamily::new(w);
    for tau in 0..f.params.t {
        for alpha in 0..f.params.a {
            let part = f.part(alpha, tau);
            for j in 1..=2u8 {
                fam.push(
                    Provenance::L2 { alpha, tau, j },
                    Comparator::PartOrdered {
                        part: part.clone(),
                        descending: j == 2,
                    },
                );
            }
        }
    }
    spot_check(fam)
}

/// The `3at` comparators `L_{α,τ,j}`: `j = 0` by `|S_{α,τ}|_v`; `j = 1, 2`
/// by the interval orders `K_{α,τ,j}` with `ε` the least weight in the
/// part. Comparators of an empty part are plain `M_0`.
pub fn build_l2_weighted(
    w: &WeightVector,
    k: &Size,
    l: &Size,
    r: usize,
    f: &GoodFunction,
) -> Result<ExtensionFamily> {
    if k >= l {
        return Err(Error::precondition("need k < l"));
    }
    check_params(w, r, f)?;
    let mut fam = ExtensionFamily::new(w.clone());
    for tau in 0..f.params.t {
        for alpha in 0..f.params.a {
            let part = f.part(alpha, tau);
            let eps_index = (0..w.len())
                .filter(|&i| part[i])
                .min_by(|&i, &j| w.entry(i).cmp(w.entry(j)).then(i.cmp(&j)));
            for j in 0..=2u8 {
                let comparator = match (eps_index, j) {
                    (None, _) => Comparator::GradedLex,
                    (Some(_), 0) => Comparator::PartSize { part: part.clone() },
                    (Some(eps_index), _) => Comparator::PartInterval {
                        part: part.clone(),
                        eps_index,
                        shifted: j == 2,
                        descending: j == 2,
                    },
                };
                fam.push(Provenance::L2 { alpha, tau, j }, comparator);
            }
        }
    }
    spot_check(fam)
}
