use serde::{Deserialize, Serialize};

/// Human activity level by time of day; high during working hours.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DisturbanceSchedule {
    pub day_level: f64,
    pub night_level: f64,
    /// Minutes after midnight at which the day level starts (inclusive).
    pub day_start_minute: u32,
    /// Minutes after midnight at which the night level resumes.
    pub day_end_minute: u32,
}

impl Default for DisturbanceSchedule {
    fn default() -> Self {
        Self {
            day_level: 1.0,
            night_level: 0.0,
            day_start_minute: 7 * 60,
            day_end_minute: 19 * 60,
        }
    }
}

impl DisturbanceSchedule {
    pub fn is_day(&self, minute_of_day: u32) -> bool {
        let m = minute_of_day % (24 * 60);
        (self.day_start_minute..self.day_end_minute).contains(&m)
    }
}

/// Disturbance level at a time of day given in minutes after midnight.
pub fn disturbance_at(schedule: &DisturbanceSchedule, minute_of_day: u32) -> f64 {
    if schedule.is_day(minute_of_day) {
        schedule.day_level
    } else {
        schedule.night_level
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn day_and_night_levels() {
        let s = DisturbanceSchedule::default();
        assert_eq!(disturbance_at(&s, 12 * 60), 1.0);
        assert_eq!(disturbance_at(&s, 3 * 60), 0.0);
        assert_eq!(disturbance_at(&s, 7 * 60), 1.0);
        assert_eq!(disturbance_at(&s, 7 * 60 - 5), 0.0);
        assert_eq!(disturbance_at(&s, 19 * 60), 0.0);
        assert_eq!(disturbance_at(&s, 19 * 60 - 5), 1.0);
    }
}
