use ndarray::{Array2, Zip};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// Adam with bias-corrected moment estimates, one moment pair per tensor.
#[derive(Debug, Clone)]
pub(crate) struct Adam {
    config: AdamConfig,
    step: i32,
    first: Vec<Array2<f64>>,
    second: Vec<Array2<f64>>,
}

impl Adam {
    pub fn new(config: AdamConfig, shapes: &[(usize, usize)]) -> Self {
        Self {
            config,
            step: 0,
            first: shapes.iter().map(|&s| Array2::zeros(s)).collect(),
            second: shapes.iter().map(|&s| Array2::zeros(s)).collect(),
        }
    }

    pub fn update(&mut self, params: [&mut Array2<f64>; 2], grads: [&Array2<f64>; 2], learning_rate: f64) {
        self.step += 1;
        let AdamConfig {
            beta1,
            beta2,
            epsilon,
        } = self.config;
        let correction1 = 1.0 - beta1.powi(self.step);
        let correction2 = 1.0 - beta2.powi(self.step);
        for (slot, (param, grad)) in params.into_iter().zip(grads).enumerate() {
            Zip::from(param)
                .and(grad)
                .and(&mut self.first[slot])
                .and(&mut self.second[slot])
                .for_each(|p, &g, m, v| {
                    *m = beta1 * *m + (1.0 - beta1) * g;
                    *v = beta2 * *v + (1.0 - beta2) * g * g;
                    let m_hat = *m / correction1;
                    let v_hat = *v / correction2;
                    *p -= learning_rate * m_hat / (v_hat.sqrt() + epsilon);
                });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_step_moves_by_learning_rate() {
        let mut a = Array2::from_elem((2, 2), 1.0);
        let mut b = Array2::from_elem((1, 3), -1.0);
        let ga = Array2::from_elem((2, 2), 4.0);
        let gb = Array2::from_elem((1, 3), -0.5);
        let mut adam = Adam::new(AdamConfig::default(), &[(2, 2), (1, 3)]);
        adam.update([&mut a, &mut b], [&ga, &gb], 0.1);
        // Bias correction makes the first step ±lr regardless of gradient scale.
        assert!(a.iter().all(|&v| (v - 0.9).abs() < 1e-7));
        assert!(b.iter().all(|&v| (v + 0.9).abs() < 1e-7));
    }

    #[test]
    fn minimizes_a_quadratic() {
        let mut x = Array2::from_elem((1, 1), 5.0);
        let mut unused = Array2::zeros((1, 1));
        let zero = Array2::zeros((1, 1));
        let mut adam = Adam::new(AdamConfig::default(), &[(1, 1), (1, 1)]);
        for _ in 0..2000 {
            let g = x.mapv(|v| 2.0 * (v - 3.0));
            adam.update([&mut x, &mut unused], [&g, &zero], 0.05);
        }
        assert!((x[[0, 0]] - 3.0).abs() < 1e-3);
    }
}
