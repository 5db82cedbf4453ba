use alloc::collections::BTreeSet;

/// Jaccard index `|S ∩ S'| / |S ∪ S'|`. Two empty sets count as identical.
pub fn jaccard<'a, T, A, B>(a: A, b: B) -> f64
where
    T: Ord + 'a,
    A: IntoIterator<Item = &'a T>,
    B: IntoIterator<Item = &'a T>,
{
    let a: BTreeSet<&T> = a.into_iter().collect();
    let b: BTreeSet<&T> = b.into_iter().collect();
    let union = a.union(&b).count();
    if union == 0 {
        return 1.0;
    }
    a.intersection(&b).count() as f64 / union as f64
}
