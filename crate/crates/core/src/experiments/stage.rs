use crate::error::{domain, Result};

/// Regime of the wind mean relative to the 5 km/h switch of the fire model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StageLabel {
    /// `2 < mu_U <= 3.5`: almost every sample stays in the wind-free branch.
    Stage1,
    /// `6.5 <= mu_U < 8`: almost every sample is in the wind branch.
    Stage2,
    /// `3.5 < mu_U < 6.5`: both branches carry probability mass.
    Stage3,
}

impl StageLabel {
    pub fn name(self) -> &'static str {
        match self {
            StageLabel::Stage1 => "stage1",
            StageLabel::Stage2 => "stage2",
            StageLabel::Stage3 => "stage3",
        }
    }
}

pub fn stage_classify(mu_wind: f64) -> Result<StageLabel> {
    if !(mu_wind > 2.0 && mu_wind < 8.0) {
        return Err(domain(format!("wind mean {mu_wind} outside (2, 8)")));
    }
    Ok(if mu_wind <= 3.5 {
        StageLabel::Stage1
    } else if mu_wind < 6.5 {
        StageLabel::Stage3
    } else {
        StageLabel::Stage2
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundaries() {
        assert_eq!(stage_classify(3.0).unwrap(), StageLabel::Stage1);
        assert_eq!(stage_classify(3.5).unwrap(), StageLabel::Stage1);
        assert_eq!(stage_classify(4.7).unwrap(), StageLabel::Stage3);
        assert_eq!(stage_classify(6.5).unwrap(), StageLabel::Stage2);
        assert_eq!(stage_classify(7.99).unwrap(), StageLabel::Stage2);
        assert!(stage_classify(2.0).is_err());
        assert!(stage_classify(8.0).is_err());
        assert!(stage_classify(f64::NAN).is_err());
    }
}
