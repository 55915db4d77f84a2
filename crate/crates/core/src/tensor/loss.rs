use super::{Graph, TensorError, Var};

/// Smallest probability fed to the log in [`cross_entropy`].
pub const LOG_FLOOR: f64 = 1e-12;

/// Mean over rows of `-ln p[r, target[r]]`.
///
/// `probs` holds one distribution per row. Probabilities below
/// [`LOG_FLOOR`] are clamped; the graph counts them in
/// [`Graph::clamped_logs`].
pub fn cross_entropy(g: &mut Graph, probs: Var, targets: &[usize]) -> Result<Var, TensorError> {
    let k = g.value(probs).cols();
    if let Some(&bad) = targets.iter().find(|&&t| t >= k) {
        return Err(TensorError::invalid(
            "cross_entropy",
            format!("target class {bad} out of range for {k} classes"),
        ));
    }
    let picked = g.pick(probs, targets)?;
    let logs = g.log(picked, LOG_FLOOR);
    let rows = targets.len().max(1) as f64;
    let total = g.sum(logs);
    Ok(g.scale(total, -1.0 / rows))
}

/// Sum of componentwise absolute differences, averaged over rows.
///
/// For a single vector this is the plain L1 distance.
pub fn absolute_error(g: &mut Graph, predicted: Var, target: Var) -> Result<Var, TensorError> {
    let rows = g.value(predicted).rows().max(1) as f64;
    let diff = g.sub(predicted, target)?;
    let abs = g.abs(diff);
    let total = g.sum(abs);
    Ok(g.scale(total, 1.0 / rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{ParamSet, Tensor};

    fn ce(p: &[f64], target: usize) -> (f64, usize) {
        let ps = ParamSet::new();
        let mut g = Graph::new(&ps);
        let v = g.constant(Tensor::from_vec(&[p.len()], p.to_vec()).unwrap());
        let l = cross_entropy(&mut g, v, &[target]).unwrap();
        (g.value(l).item(), g.clamped_logs())
    }

    #[test]
    fn cross_entropy_values() {
        assert_eq!(ce(&[1.0, 0.0, 0.0], 0).0, 0.0);
        assert!((ce(&[0.5, 0.5], 0).0 - std::f64::consts::LN_2).abs() < 1e-12);
        assert!((ce(&[0.1, 0.9], 0).0 - 10f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn zero_probability_is_clamped_and_flagged() {
        let (loss, clamped) = ce(&[0.0, 1.0], 0);
        assert!(loss.is_finite());
        assert!((loss + LOG_FLOOR.ln()).abs() < 1e-9);
        assert_eq!(clamped, 1);
    }

    #[test]
    fn target_out_of_range() {
        let ps = ParamSet::new();
        let mut g = Graph::new(&ps);
        let v = g.constant(Tensor::from_vec(&[2], vec![0.5, 0.5]).unwrap());
        assert!(cross_entropy(&mut g, v, &[2]).is_err());
    }

    fn l1(a: &[f64], b: &[f64]) -> Result<f64, TensorError> {
        let ps = ParamSet::new();
        let mut g = Graph::new(&ps);
        let x = g.constant(Tensor::from_vec(&[a.len()], a.to_vec()).unwrap());
        let y = g.constant(Tensor::from_vec(&[b.len()], b.to_vec()).unwrap());
        let l = absolute_error(&mut g, x, y)?;
        Ok(g.value(l).item())
    }

    #[test]
    fn absolute_error_values() {
        assert_eq!(l1(&[0.3, 0.7], &[0.3, 0.7]).unwrap(), 0.0);
        assert_eq!(l1(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 2.0);
        assert!((l1(&[0.2, 0.8], &[0.0, 1.0]).unwrap() - 0.4).abs() < 1e-12);
        assert!(l1(&[0.2, 0.8], &[0.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn absolute_error_subgradient_zero_at_ties() {
        let mut ps = ParamSet::new();
        let p = ps.add("p", Tensor::from_vec(&[2], vec![0.5, 0.2]).unwrap(), true);
        let mut g = Graph::new(&ps);
        let x = g.param(p);
        let y = g.constant(Tensor::from_vec(&[2], vec![0.5, 0.0]).unwrap());
        let l = absolute_error(&mut g, x, y).unwrap();
        let grads = g.backward(l).unwrap();
        assert_eq!(grads.get(p).unwrap().data(), &[0.0, 1.0]);
    }
}
