//! Shared cache of star kernels keyed by `(level, γ, q, K)`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use qslice::kernels::StarKernel;
use qslice::Quaternion;

type Key = (usize, u64, [u64; 4], usize);

/// Building `K(·, q)` as a star series is the expensive part of a star-path
/// evaluation; many evaluations share one `q`.
#[derive(Default)]
pub struct StarKernelCache {
    map: RwLock<HashMap<Key, Arc<StarKernel>>>,
}

impl StarKernelCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// `γ = 0` gives `K_{2,level}(·, q)`, `γ = 1` gives `K_{1,level}(·, q)`.
    pub fn get_or_build(&self, level: usize, gamma: f64, q: Quaternion, terms: usize) -> Arc<StarKernel> {
        let key = (
            level,
            gamma.to_bits(),
            [q.w.to_bits(), q.x.to_bits(), q.y.to_bits(), q.z.to_bits()],
            terms,
        );
        if let Some(k) = self.map.read().unwrap().get(&key) {
            return Arc::clone(k);
        }
        let built = Arc::new(if gamma == 0.0 {
            StarKernel::second(level, q, terms)
        } else {
            StarKernel::first(level, q, terms)
        });
        Arc::clone(self.map.write().unwrap().entry(key).or_insert(built))
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qslice::kernels::k2_star;

    #[test]
    fn hits_return_the_same_kernel() {
        let cache = StarKernelCache::new();
        let q = Quaternion::new(0.3, -0.2, 0.5, 0.1);
        let a = cache.get_or_build(2, 0.0, q, 30);
        let b = cache.get_or_build(2, 0.0, q, 30);
        assert!(Arc::ptr_eq(&a, &b));
        cache.get_or_build(2, 1.0, q, 30);
        cache.get_or_build(2, 0.0, q, 31);
        assert_eq!(cache.len(), 3);
        let p = Quaternion::new(-0.1, 0.4, 0.0, 0.2);
        assert_eq!(a.eval(p), k2_star(2, p, q, 30));
    }

    #[test]
    fn concurrent_builds_agree() {
        let cache = StarKernelCache::new();
        let qs: Vec<Quaternion> = (0..4).map(|i| Quaternion::new(0.1 * i as f64, 0.2, -0.1, 0.3)).collect();
        let p = Quaternion::new(0.5, 0.1, 0.1, -0.2);
        let values: Vec<Vec<Quaternion>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..8)
                .map(|_| s.spawn(|| qs.iter().map(|q| cache.get_or_build(1, 0.0, *q, 25).eval(p).value).collect()))
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        assert_eq!(cache.len(), qs.len());
        assert!(values.windows(2).all(|w| w[0] == w[1]));
    }
}
