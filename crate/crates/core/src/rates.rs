use crate::error::{Error, Result};
use crate::types::{ErrorRateKind, IndexSet, TruthMask};

/// False discovery proportion `|R ∩ T| / max(|R|, 1)`.
pub fn fdp(rejected: &IndexSet, truth: &TruthMask) -> Result<f64> {
    check_universe(rejected, truth)?;
    Ok(false_rejections(rejected, truth) as f64 / rejected.len().max(1) as f64)
}

/// Evaluates the error functional `kind` on one realization of `(R, S)`.
///
/// `selected` only matters for [`ErrorRateKind::FcrStyle`], where it must
/// contain `rejected`.
pub fn error_value(kind: ErrorRateKind, rejected: &IndexSet, selected: &IndexSet, truth: &TruthMask) -> Result<f64> {
    check_universe(rejected, truth)?;
    check_universe(selected, truth)?;
    let value = match kind {
        ErrorRateKind::Fdr => fdp(rejected, truth)?,
        ErrorRateKind::Fwer => indicator(fdp(rejected, truth)? > 0.0),
        ErrorRateKind::Fdx { gamma } => indicator(fdp(rejected, truth)? > gamma),
        ErrorRateKind::FcrStyle => {
            if !rejected.is_subset(selected) {
                return Err(Error::contract(format!(
                    "FCR-style rate needs R ⊆ S, got R={rejected} and S={selected}"
                )));
            }
            false_rejections(rejected, truth) as f64 / selected.len().max(1) as f64
        }
    };
    Ok(value)
}

pub(crate) fn false_rejections(rejected: &IndexSet, truth: &TruthMask) -> usize {
    rejected.iter().filter(|&i| truth.is_null(i)).count()
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn check_universe(set: &IndexSet, truth: &TruthMask) -> Result<()> {
    if set.universe_size() != truth.len() {
        return Err(Error::contract(format!(
            "index set universe {} does not match truth mask length {}",
            set.universe_size(),
            truth.len()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(n: usize, m: &[usize]) -> IndexSet {
        IndexSet::new(n, m.iter().copied()).unwrap()
    }

    #[test]
    fn fdp_examples() {
        let truth = TruthMask::from_nulls(2, &[2]).unwrap();
        assert_eq!(fdp(&set(2, &[1, 2]), &truth).unwrap(), 0.5);
        assert_eq!(fdp(&IndexSet::empty(2), &truth).unwrap(), 0.0);
        let all = TruthMask::all_null(3);
        assert_eq!(fdp(&set(3, &[1, 2, 3]), &all).unwrap(), 1.0);
    }

    #[test]
    fn fdp_size_mismatch() {
        let truth = TruthMask::all_null(3);
        assert!(matches!(fdp(&set(2, &[1]), &truth), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn error_value_examples() {
        let truth = TruthMask::from_nulls(2, &[1]).unwrap();
        let v = error_value(ErrorRateKind::FcrStyle, &set(2, &[1]), &set(2, &[1, 2]), &truth);
        assert_eq!(v.unwrap(), 0.5);

        let none = TruthMask::from_nulls(2, &[]).unwrap();
        let v = error_value(ErrorRateKind::Fwer, &set(2, &[1]), &IndexSet::full(2), &none);
        assert_eq!(v.unwrap(), 0.0);

        let v = error_value(
            ErrorRateKind::fdx(0.4).unwrap(),
            &set(2, &[1, 2]),
            &IndexSet::full(2),
            &truth,
        );
        assert_eq!(v.unwrap(), 1.0);
    }

    #[test]
    fn fcr_style_requires_r_in_s() {
        let truth = TruthMask::all_null(2);
        let r = error_value(ErrorRateKind::FcrStyle, &set(2, &[1, 2]), &set(2, &[1]), &truth);
        assert!(matches!(r, Err(Error::ContractViolation(_))));
    }

    fn instance() -> impl Strategy<Value = (Vec<bool>, Vec<bool>)> {
        (1usize..12).prop_flat_map(|n| {
            (
                proptest::collection::vec(any::<bool>(), n),
                proptest::collection::vec(any::<bool>(), n),
            )
        })
    }

    proptest! {
        #[test]
        fn fdp_in_unit_interval_and_monotone((nulls, rej) in instance()) {
            let n = nulls.len();
            let truth = TruthMask::new(nulls.clone());
            let r = IndexSet::from_predicate(n, |i| rej[i - 1]);
            let v = fdp(&r, &truth).unwrap();
            prop_assert!((0.0..=1.0).contains(&v));
            // adding a null index never lowers the count of false rejections
            if let Some(j) = (1..=n).find(|&j| nulls[j - 1] && !r.contains(j)) {
                let bigger = r.union(&IndexSet::singleton(n, j).unwrap()).unwrap();
                prop_assert!(false_rejections(&bigger, &truth) > false_rejections(&r, &truth));
            }
        }

        #[test]
        fn fcr_style_with_full_selection_is_below_fdp((nulls, rej) in instance()) {
            let n = nulls.len();
            let truth = TruthMask::new(nulls);
            let r = IndexSet::from_predicate(n, |i| rej[i - 1]);
            let u = IndexSet::full(n);
            let fcr = error_value(ErrorRateKind::FcrStyle, &r, &u, &truth).unwrap();
            let expected = false_rejections(&r, &truth) as f64 / n as f64;
            prop_assert_eq!(fcr, expected);
            prop_assert!(fcr <= fdp(&r, &truth).unwrap());
        }
    }
}
