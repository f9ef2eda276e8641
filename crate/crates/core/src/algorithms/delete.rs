use crate::oracle::Oracle;
use crate::{IdSet, Result};

/// Single cleanup pass: visits the members of `set` outside `protected` in
/// ascending id order and drops `u` whenever `f(u | S - u) < 0` against the
/// current `S`.
///
/// The result never has a lower value than the input, and every element
/// kept has a non-negative marginal with respect to the rest. Costs one
/// query for the starting value plus one per visited element.
pub fn delete(oracle: &Oracle, set: &IdSet, protected: &IdSet) -> Result<IdSet> {
    let value = oracle.eval(set)?;
    Ok(delete_from(oracle, set.clone(), value, protected)?.0)
}

/// [`delete`] with the caller's cached `f(set)`; returns the cleaned set and
/// its value.
pub(crate) fn delete_from(
    oracle: &Oracle,
    mut set: IdSet,
    mut value: f64,
    protected: &IdSet,
) -> Result<(IdSet, f64)> {
    for u in set.to_vec() {
        if protected.contains(u) {
            continue;
        }
        set.remove(u);
        let without = oracle.eval(&set)?;
        if value - without < 0.0 {
            value = without;
        } else {
            set.insert(u);
        }
    }
    Ok((set, value))
}
