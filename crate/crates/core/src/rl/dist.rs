//! Masked categorical distributions over logits.

use rand::Rng;

/// Softmax restricted to `mask` (all entries when `None`); masked entries get probability 0.
pub fn masked_softmax(logits: &[f64], mask: Option<&[bool]>) -> Vec<f64> {
    let allowed = |i: usize| mask.is_none_or(|m| m[i]);
    let max = logits
        .iter()
        .enumerate()
        .filter(|(i, _)| allowed(*i))
        .map(|(_, l)| *l)
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(max.is_finite(), "every action is masked");
    let mut p: Vec<f64> = logits
        .iter()
        .enumerate()
        .map(|(i, l)| if allowed(i) { (l - max).exp() } else { 0.0 })
        .collect();
    let z: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= z);
    p
}

pub fn log_prob(probs: &[f64], a: usize) -> f64 {
    probs[a].ln()
}

pub fn entropy(probs: &[f64]) -> f64 {
    -probs.iter().filter(|p| **p > 0.0).map(|p| p * p.ln()).sum::<f64>()
}

/// Number of actions with nonzero support.
pub fn support(probs: &[f64]) -> usize {
    probs.iter().filter(|p| **p > 0.0).count()
}

/// Entropy divided by log(support), in [0, 1]; 0 when only one action is allowed.
pub fn normalized_entropy(probs: &[f64]) -> f64 {
    let n = support(probs);
    if n <= 1 {
        0.0
    } else {
        entropy(probs) / (n as f64).ln()
    }
}

/// d log p(a) / d logits.
pub fn grad_log_prob(probs: &[f64], a: usize) -> Vec<f64> {
    let mut g: Vec<f64> = probs.iter().map(|p| -p).collect();
    g[a] += 1.0;
    g
}

/// d normalized_entropy / d logits.
pub fn grad_normalized_entropy(probs: &[f64]) -> Vec<f64> {
    let n = support(probs);
    if n <= 1 {
        return vec![0.0; probs.len()];
    }
    let h = entropy(probs);
    let scale = 1.0 / (n as f64).ln();
    probs
        .iter()
        .map(|&p| if p > 0.0 { -p * (p.ln() + h) * scale } else { 0.0 })
        .collect()
}

pub fn sample<R: Rng + ?Sized>(rng: &mut R, probs: &[f64]) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, p) in probs.iter().enumerate() {
        if *p > 0.0 {
            acc += p;
            last = i;
            if u < acc {
                return i;
            }
        }
    }
    last
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mask_forces_single_action() {
        let mut mask = vec![false; 8];
        mask[0] = true;
        let p = masked_softmax(&[3.0, 9.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0], Some(&mask));
        assert_eq!(p[0], 1.0);
        assert_eq!(normalized_entropy(&p), 0.0);
    }

    #[test]
    fn sums_to_one_and_entropy_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            let n = rng.gen_range(1..40);
            let logits: Vec<f64> = (0..n).map(|_| rng.gen_range(-20.0..20.0)).collect();
            let mask: Vec<bool> = (0..n).map(|i| i == 0 || rng.gen_bool(0.7)).collect();
            let p = masked_softmax(&logits, Some(&mask));
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(entropy(&p) <= (n as f64).ln() + 1e-12);
            let a = sample(&mut rng, &p);
            assert!(mask[a]);
        }
    }

    #[test]
    fn entropy_gradient_matches_differences() {
        let logits = [0.3, -1.2, 2.0, 0.0];
        let mask = [true, true, false, true];
        let g = grad_normalized_entropy(&masked_softmax(&logits, Some(&mask)));
        for i in 0..4 {
            let mut up = logits;
            let mut dn = logits;
            up[i] += 1e-6;
            dn[i] -= 1e-6;
            let fd = (normalized_entropy(&masked_softmax(&up, Some(&mask)))
                - normalized_entropy(&masked_softmax(&dn, Some(&mask))))
                / 2e-6;
            assert!((fd - g[i]).abs() < 1e-8);
        }
    }
}
