use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

/// A stable conjugacy class of `G` with its kappa-orbital values.
#[derive(Clone, Debug)]
pub struct StableClass {
    pub iota_bar: u64,
    /// Orbital value for each `kappa` in the Kottwitz group (index 0 is trivial).
    pub kappa_values: Vec<Ratio<i64>>,
    /// Endoscopic datum attached to each `(gamma_0, kappa)`.
    pub kappa_datum: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct SyntheticDatum {
    pub out_order: u64,
    pub tau_h: u64,
}

/// A stable class of an endoscopic group with its image `(gamma_0, kappa)`.
#[derive(Clone, Debug)]
pub struct HClass {
    pub datum: usize,
    pub iota_bar: u64,
    pub gamma0: usize,
    pub kappa: usize,
    pub stable_orbital: Ratio<i64>,
}

/// Input for [`destabilization_check`].
#[derive(Clone, Debug)]
pub struct SyntheticData {
    pub tau_g: u64,
    pub classes: Vec<StableClass>,
    pub data: Vec<SyntheticDatum>,
    pub h_classes: Vec<HClass>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DestabReport {
    pub lhs: String,
    pub rhs: String,
    /// `(gamma_0, kappa)` pairs whose fibre violates the counting identity.
    pub fiber_violations: Vec<(usize, usize)>,
    pub transfer_violations: usize,
    pub passed: bool,
}

/// Compares the kappa-expansion of the elliptic part of the stable trace
/// with the endoscopic sum, and checks the fibre counting identity
/// `iota_G(gamma_0)^-1 = lambda^-1 sum_{gamma_H -> (gamma_0, kappa)} iota_H(gamma_H)^-1`.
pub fn destabilization_check(d: &SyntheticData) -> DestabReport {
    let tau_g = Ratio::from_integer(d.tau_g as i64);
    let mut lhs = Ratio::from_integer(0);
    for c in &d.classes {
        for o in &c.kappa_values {
            lhs += tau_g * o / c.iota_bar as i64;
        }
    }
    let mut rhs = Ratio::from_integer(0);
    for h in &d.h_classes {
        let e = &d.data[h.datum];
        let iota = Ratio::new(d.tau_g as i64, (e.tau_h * e.out_order) as i64);
        rhs += iota * Ratio::from_integer(e.tau_h as i64) * h.stable_orbital / h.iota_bar as i64;
    }
    let mut fiber_violations = Vec::new();
    let mut transfer_violations = 0;
    for (g, c) in d.classes.iter().enumerate() {
        for (k, &datum) in c.kappa_datum.iter().enumerate() {
            let lambda = d.data[datum].out_order as i64;
            let mut sum = Ratio::from_integer(0);
            let mut wrong_datum = false;
            for h in d.h_classes.iter().filter(|h| h.gamma0 == g && h.kappa == k) {
                wrong_datum |= h.datum != datum;
                sum += Ratio::new(1, h.iota_bar as i64);
                if h.stable_orbital != c.kappa_values[k] {
                    transfer_violations += 1;
                }
            }
            if wrong_datum || sum / lambda != Ratio::new(1, c.iota_bar as i64) {
                fiber_violations.push((g, k));
            }
        }
    }
    let passed = fiber_violations.is_empty() && transfer_violations == 0 && lhs == rhs;
    DestabReport { lhs: lhs.to_string(), rhs: rhs.to_string(), fiber_violations, transfer_violations, passed }
}

impl SyntheticData {
    /// Random dataset satisfying the counting identity by construction.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let tau_g = *[1u64, 2].choose(rng).unwrap();
        let mut data = vec![SyntheticDatum { out_order: 1, tau_h: tau_g }];
        for _ in 0..rng.gen_range(1..=3) {
            data.push(SyntheticDatum { out_order: *[1, 2, 4].choose(rng).unwrap(), tau_h: *[1, 2, 4].choose(rng).unwrap() });
        }
        let mut classes = Vec::new();
        let mut h_classes = Vec::new();
        for g in 0..rng.gen_range(1..=5) {
            let iota_bar = *[1u64, 2].choose(rng).unwrap();
            let nk = *[1usize, 2, 4].choose(rng).unwrap();
            let mut kappa_values = Vec::new();
            let mut kappa_datum = Vec::new();
            for k in 0..nk {
                let datum = if k == 0 { 0 } else { rng.gen_range(1..data.len()) };
                let value = Ratio::new(rng.gen_range(-20..=20), rng.gen_range(1..=6));
                let c = if k == 0 { 1 } else { *[1u64, 2].choose(rng).unwrap() };
                let size = data[datum].out_order * c;
                for _ in 0..size {
                    h_classes.push(HClass { datum, iota_bar: iota_bar * c, gamma0: g, kappa: k, stable_orbital: value });
                }
                kappa_values.push(value);
                kappa_datum.push(datum);
            }
            classes.push(StableClass { iota_bar, kappa_values, kappa_datum });
        }
        h_classes.shuffle(rng);
        SyntheticData { tau_g, classes, data, h_classes }
    }

    /// Breaks exactly one fibre: drops, duplicates or re-weights one of its members.
    pub fn corrupt_one_fiber<R: Rng>(&mut self, rng: &mut R) {
        let i = rng.gen_range(0..self.h_classes.len());
        match rng.gen_range(0..3) {
            0 => {
                self.h_classes.remove(i);
            }
            1 => {
                let h = self.h_classes[i].clone();
                self.h_classes.push(h);
            }
            _ => {
                let h = &mut self.h_classes[i];
                h.iota_bar = if h.iota_bar == 1 { 2 } else { h.iota_bar / 2 };
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn sl2_toy_fibre() {
        // one elliptic class, kappa nontrivial lands on the torus with lambda = 2
        let d = SyntheticData {
            tau_g: 1,
            classes: vec![StableClass {
                iota_bar: 1,
                kappa_values: vec![Ratio::from_integer(3), Ratio::from_integer(1)],
                kappa_datum: vec![0, 1],
            }],
            data: vec![SyntheticDatum { out_order: 1, tau_h: 1 }, SyntheticDatum { out_order: 2, tau_h: 2 }],
            h_classes: vec![
                HClass { datum: 0, iota_bar: 1, gamma0: 0, kappa: 0, stable_orbital: Ratio::from_integer(3) },
                HClass { datum: 1, iota_bar: 1, gamma0: 0, kappa: 1, stable_orbital: Ratio::from_integer(1) },
                HClass { datum: 1, iota_bar: 1, gamma0: 0, kappa: 1, stable_orbital: Ratio::from_integer(1) },
            ],
        };
        assert!(destabilization_check(&d).passed);
    }

    #[test]
    fn random_consistent_and_corrupted() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let mut d = SyntheticData::random(&mut rng);
            assert!(destabilization_check(&d).passed);
            d.corrupt_one_fiber(&mut rng);
            assert!(!destabilization_check(&d).passed);
        }
    }
}
