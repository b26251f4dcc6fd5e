/// A finite formal convex sum `Σ pᵢ·xᵢ`, plus the mass lost to truncation.
///
/// Entries are kept in insertion order; equality questions go through
/// [`Distribution::equivalent`], which is insensitive to order.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution<T> {
    pub entries: Vec<(f64, T)>,
    pub deficit: f64,
}

impl<T> Distribution<T> {
    pub fn point(x: T) -> Self {
        Distribution { entries: vec![(1.0, x)], deficit: 0.0 }
    }

    pub fn empty() -> Self {
        Distribution { entries: Vec::new(), deficit: 0.0 }
    }

    /// All mass lost.
    pub fn truncated(mass: f64) -> Self {
        Distribution { entries: Vec::new(), deficit: mass }
    }

    pub fn from_entries(entries: Vec<(f64, T)>) -> Self {
        Distribution { entries, deficit: 0.0 }
    }

    /// Mass carried by entries, excluding the deficit.
    pub fn mass(&self) -> f64 {
        self.entries.iter().map(|(p, _)| p).sum()
    }

    /// `mass + deficit`; 1 for a well-formed distribution.
    pub fn total(&self) -> f64 {
        self.mass() + self.deficit
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(mut self, p: f64) -> Self {
        for e in &mut self.entries {
            e.0 *= p;
        }
        self.deficit *= p;
        self
    }

    /// Adds another weighted distribution into this one (both already
    /// carrying their final weights).
    pub fn absorb(&mut self, other: Distribution<T>) {
        self.entries.extend(other.entries);
        self.deficit += other.deficit;
    }

    /// `p·a + (1-p)·b`
    pub fn mix(p: f64, a: Self, b: Self) -> Self {
        let mut out = a.scale(p);
        out.absorb(b.scale(1.0 - p));
        out
    }

    pub fn map<U>(self, mut f: impl FnMut(T) -> U) -> Distribution<U> {
        Distribution { entries: self.entries.into_iter().map(|(p, x)| (p, f(x))).collect(), deficit: self.deficit }
    }

    /// Kleisli extension: each entry is replaced by `f`'s distribution,
    /// weighted by the entry's probability.
    pub fn bind<U, E>(self, mut f: impl FnMut(T) -> Result<Distribution<U>, E>) -> Result<Distribution<U>, E> {
        let mut out = Distribution::truncated(self.deficit);
        for (p, x) in self.entries {
            out.absorb(f(x)?.scale(p));
        }
        Ok(out)
    }

    /// Coalesces entries equivalent under `eq` by summing their
    /// probabilities, keeping the first representative, and drops entries
    /// of zero probability.
    pub fn merge_by(self, eq: impl Fn(&T, &T) -> bool) -> Self {
        let mut out: Vec<(f64, T)> = Vec::with_capacity(self.entries.len());
        for (p, x) in self.entries {
            if p == 0.0 {
                continue;
            }
            match out.iter_mut().find(|(_, y)| eq(y, &x)) {
                Some(slot) => slot.0 += p,
                None => out.push((p, x)),
            }
        }
        Distribution { entries: out, deficit: self.deficit }
    }

    /// Drops entries with probability at or below `threshold`, moving their
    /// mass to the deficit.
    pub fn prune(mut self, threshold: f64) -> Self {
        if threshold <= 0.0 {
            return self;
        }
        let mut lost = 0.0;
        self.entries.retain(|(p, _)| {
            let keep = *p > threshold;
            if !keep {
                lost += p;
            }
            keep
        });
        self.deficit += lost;
        self
    }

    /// Same multiset of outcomes after merging, probabilities within `tol`.
    pub fn equivalent(&self, other: &Self, eq: impl Fn(&T, &T) -> bool, tol: f64) -> bool
    where
        T: Clone,
    {
        let a = self.clone().merge_by(&eq);
        let b = other.clone().merge_by(&eq);
        if a.entries.len() != b.entries.len() || (a.deficit - b.deficit).abs() > tol {
            return false;
        }
        a.entries.iter().all(|(p, x)| b.entries.iter().any(|(q, y)| eq(x, y) && (p - q).abs() <= tol))
    }
}

impl<T: PartialEq> Distribution<T> {
    pub fn merged(self) -> Self {
        self.merge_by(|a, b| a == b)
    }

    pub fn prob_of(&self, x: &T) -> f64 {
        self.entries.iter().filter(|(_, y)| y == x).map(|(p, _)| p).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn idempotence() {
        let d = Distribution::mix(0.5, Distribution::point('x'), Distribution::point('x')).merged();
        assert_eq!(d.entries, vec![(1.0, 'x')]);
    }

    #[test]
    fn zero_absorption() {
        let d = Distribution::mix(0.0, Distribution::point('x'), Distribution::point('y')).merged();
        assert_eq!(d.entries, vec![(1.0, 'y')]);
    }

    #[test]
    fn two_step_coalescing() {
        let d = Distribution::from_entries(vec![(0.25, 'x'), (0.25, 'y'), (0.5, 'x')]).merged();
        assert_eq!(d.entries, vec![(0.75, 'x'), (0.25, 'y')]);
    }

    #[test]
    fn bind_multiplies() {
        let coin = Distribution::from_entries(vec![(0.5, false), (0.5, true)]);
        let d = coin
            .bind(|b| -> Result<_, ()> {
                Ok(if b { Distribution::from_entries(vec![(0.25, 1), (0.75, 2)]) } else { Distribution::truncated(1.0) })
            })
            .unwrap();
        assert_eq!(d.entries, vec![(0.125, 1), (0.375, 2)]);
        assert_eq!(d.deficit, 0.5);
        assert!((d.total() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn prune_moves_mass_to_deficit() {
        let d = Distribution::from_entries(vec![(0.999, 'a'), (0.001, 'b')]).prune(0.01);
        assert_eq!(d.entries, vec![(0.999, 'a')]);
        assert!((d.deficit - 0.001).abs() < 1e-15);
    }
}
