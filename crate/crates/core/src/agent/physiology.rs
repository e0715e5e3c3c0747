use crate::TICKS_PER_DAY;

/// Asymptotic body weight (kg) of the growth curve.
pub const ASYMPTOTIC_WEIGHT: f64 = 4000.0;
const GROWTH_RATE: f64 = 0.149;
const GROWTH_ORIGIN: f64 = -3.16;
/// Daily dry matter intake as a fraction of body weight.
pub const INTAKE_FRACTION: f64 = 0.017;
/// Largest fitness credit either daily channel can give.
pub const MAX_DAILY_CREDIT: f64 = 0.1;

/// Logistic probability of engaging in thermoregulation.
pub fn thermoregulation_probability(t_current: f64, t_threshold: f64, state: f64) -> f64 {
    1.0 / (1.0 + (state * (t_current - t_threshold)).exp())
}

/// Von Bertalanffy body weight (kg) at `age` years.
pub fn body_weight(age: f64) -> f64 {
    ASYMPTOTIC_WEIGHT * (1.0 - (-GROWTH_RATE * (age - GROWTH_ORIGIN)).exp()).powi(3)
}

pub fn daily_dry_matter_intake(body_weight: f64) -> f64 {
    INTAKE_FRACTION * body_weight
}

/// Fitness credit for a day's eating: `a` thermoregulation ticks, `x` kg eaten.
pub fn food_increment(a: u32, x: f64, ddmi: f64) -> f64 {
    let day = TICKS_PER_DAY as f64;
    MAX_DAILY_CREDIT * (day - a as f64) / day * x.min(ddmi) / ddmi
}

/// Fitness credit for a day's thermoregulation: `y` of `a` scheduled ticks succeeded.
pub fn thermoregulation_increment(a: u32, y: u32) -> f64 {
    if a == 0 {
        return 0.0;
    }
    MAX_DAILY_CREDIT * (a as f64 / TICKS_PER_DAY as f64) * (y as f64 / a as f64)
}
