use thiserror::Error;

use super::{Graph, ParamId, ParamSet, TensorError, Var};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GradCheckError {
    #[error("step {0} outside [1e-6, 1e-4]")]
    StepOutOfRange(f64),
    #[error("parameter `{0}` does not require gradients")]
    Frozen(String),
    #[error("non-finite {what} at component {index}: {value}")]
    NonFinite {
        what: &'static str,
        index: usize,
        value: f64,
    },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Compares the analytic gradient of a scalar expression with respect to
/// `param` against central differences, returning the largest relative
/// error `|a - n| / max(|a|, |n|, 1e-12)` over all components.
///
/// `expr` must rebuild the same expression on every call; it is evaluated
/// once for the analytic pass and twice per component.
pub fn gradient_check<F>(
    params: &mut ParamSet,
    param: ParamId,
    h: f64,
    expr: F,
) -> Result<f64, GradCheckError>
where
    F: Fn(&mut Graph) -> Result<Var, TensorError>,
{
    if !(1e-6..=1e-4).contains(&h) {
        return Err(GradCheckError::StepOutOfRange(h));
    }
    if !params.get(param).requires_grad {
        return Err(GradCheckError::Frozen(params.get(param).name.clone()));
    }

    let analytic = {
        let mut g = Graph::new(params);
        let root = expr(&mut g)?;
        let value = g.value(root).item();
        if !value.is_finite() {
            return Err(GradCheckError::NonFinite {
                what: "loss",
                index: 0,
                value,
            });
        }
        let grads = g.backward(root)?;
        grads
            .get(param)
            .map(|t| t.data().to_vec())
            .unwrap_or_else(|| vec![0.0; params.value(param).len()])
    };

    let eval = |params: &ParamSet| -> Result<f64, GradCheckError> {
        let mut g = Graph::new(params);
        let root = expr(&mut g)?;
        Ok(g.value(root).item())
    };

    let mut worst = 0.0f64;
    for (i, &a) in analytic.iter().enumerate() {
        if !a.is_finite() {
            return Err(GradCheckError::NonFinite {
                what: "analytic gradient",
                index: i,
                value: a,
            });
        }
        let original = params.value(param).data()[i];
        params.value_mut(param).data_mut()[i] = original + h;
        let plus = eval(params);
        params.value_mut(param).data_mut()[i] = original - h;
        let minus = eval(params);
        params.value_mut(param).data_mut()[i] = original;
        let numeric = (plus? - minus?) / (2.0 * h);
        if !numeric.is_finite() {
            return Err(GradCheckError::NonFinite {
                what: "numeric gradient",
                index: i,
                value: numeric,
            });
        }
        let denom = a.abs().max(numeric.abs()).max(1e-12);
        worst = worst.max((a - numeric).abs() / denom);
    }
    Ok(worst)
}
