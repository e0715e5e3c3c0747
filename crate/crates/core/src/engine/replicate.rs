use std::f64::consts::PI;

use chrono::{Datelike, Duration, NaiveDate, NaiveDateTime};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::load_grid;
use super::{stream_seed, EngineError, RunConfig, Stream};
use crate::agent::{ElephantAgent, MemoryMatrix, Mode, Surroundings, TargetKind};
use crate::environment::{
    assign_agri_plots, disturbance_at, generate_synthetic_landscape, hourly_field, init_food, TemperatureModel,
};
use crate::terrain::{build_stack, RasterGrid, TerrainStack};
use crate::{MINUTES_PER_TICK, TICKS_PER_DAY, TICKS_PER_HOUR};

/// Gaps outside plantations shorter than this many ticks (one hour) do not
/// end a raid episode.
pub const RAID_GAP_TICKS: usize = TICKS_PER_HOUR;

const TICKS_PER_YEAR: usize = TICKS_PER_DAY * 365;

/// Shared, read-only inputs of every replicate in a batch.
#[derive(Debug, Clone)]
pub struct World {
    pub stack: TerrainStack,
    pub temperature: TemperatureModel,
    pub start: (f64, f64),
}

/// Loads or generates the landscape and climate described by `config`.
pub fn prepare_world(config: &RunConfig) -> Result<World, EngineError> {
    config.validate()?;
    let land = &config.landscape;
    let policy = land.nodata_policy();
    let (stack, default_start) = match &land.synthetic {
        Some(spec) => {
            let generated = generate_synthetic_landscape(spec)
                .map_err(|e| EngineError::config("landscape.synthetic", e.to_string()))?;
            (generated.stack, Some(generated.start))
        }
        None => {
            let elevation = load_grid(
                land.elevation.as_ref().expect("validated"),
                policy,
                "landscape.elevation",
            )?;
            let landuse = load_grid(land.landuse.as_ref().expect("validated"), policy, "landscape.landuse")?;
            let buildings = match &land.buildings {
                Some(p) => load_grid(p, policy, "landscape.buildings")?,
                None => RasterGrid::filled(elevation.header.clone(), 0.0),
            };
            let plots = match &land.agri_plots {
                Some(p) => load_grid(p, policy, "landscape.agri_plots")?,
                None => {
                    let seed = stream_seed(config.run.master_seed, u64::MAX, Stream::AgriPlots);
                    assign_agri_plots(&landuse, &land.agri_shares, &mut ChaCha8Rng::seed_from_u64(seed))
                        .map_err(|e| EngineError::config("landscape.landuse", e.to_string()))?
                }
            };
            let stack = build_stack(elevation, landuse, buildings)
                .and_then(|s| s.with_agri_plots(plots))
                .map_err(|e| EngineError::config("landscape", e.to_string()))?;
            (stack, None)
        }
    };
    let start = match (config.run.start, default_start) {
        (Some([x, y]), _) => (x, y),
        (None, Some(s)) => s,
        (None, None) => return Err(EngineError::config("run.start", "required for file-based landscapes")),
    };
    if !stack.header().contains(start.0, start.1) {
        return Err(EngineError::config(
            "run.start",
            format!("({}, {}) is outside the landscape", start.0, start.1),
        ));
    }
    let temperature = config.temperature.build(policy)?;
    Ok(World {
        stack,
        temperature,
        start,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TickRecord {
    pub tick: u32,
    pub x: f64,
    pub y: f64,
    pub mode: Mode,
    pub fitness: f64,
    pub cell: u32,
    /// Food-deprivation day count at the time of this tick.
    pub deprived_days: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    CropDamage,
    InfrastructureDamage,
    WaterVisit,
    RaidStart,
    RaidEnd,
    Death,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::CropDamage => "crop_damage",
            EventKind::InfrastructureDamage => "infrastructure_damage",
            EventKind::WaterVisit => "water_visit",
            EventKind::RaidStart => "raid_start",
            EventKind::RaidEnd => "raid_end",
            EventKind::Death => "death",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub tick: u32,
    pub kind: EventKind,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RaidEpisode {
    pub start_tick: usize,
    pub end_tick: usize,
    pub deprived_days_at_onset: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DailyIntake {
    pub day: u32,
    pub month: u32,
    pub intake: f64,
    pub forest_intake: f64,
    pub crop_intake: f64,
    pub thermoregulation_ticks: u32,
    pub thermoregulated_ticks: u32,
    pub fitness: f64,
    pub deprived_days: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ModeTicks {
    pub random_walk: usize,
    pub foraging: usize,
    pub thermoregulation: usize,
    pub escape: usize,
}

impl ModeTicks {
    fn add(&mut self, mode: Mode) {
        match mode {
            Mode::RandomWalk => self.random_walk += 1,
            Mode::Foraging => self.foraging += 1,
            Mode::Thermoregulation => self.thermoregulation += 1,
            Mode::Escape => self.escape += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.random_walk + self.foraging + self.thermoregulation + self.escape
    }
}

/// Per-replicate aggregates; also the unit the raid statistics work on.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ReplicateSummary {
    pub index: usize,
    pub month: u32,
    pub ticks: usize,
    pub died: bool,
    pub death_tick: Option<usize>,
    /// Reached at least one food target on a plantation cell.
    pub raided: bool,
    pub crop_target_visits: usize,
    pub raid_episodes: Vec<RaidEpisode>,
    pub plantation_ticks: usize,
    /// Plantation ticks outside escape mode.
    pub plantation_interior_ticks: usize,
    /// The subset of those falling in the disturbance day window.
    pub plantation_interior_day_ticks: usize,
    /// Ticks spent on cells steeper than the agent's slope limit.
    pub steep_ticks: usize,
    pub crop_damage_events: usize,
    pub infrastructure_damage_events: usize,
    pub water_visits: usize,
    pub mode_ticks: ModeTicks,
    pub initial_food_kg: f64,
    pub final_food_kg: f64,
    pub consumed_kg: f64,
    pub final_fitness: f64,
    pub daily: Vec<DailyIntake>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateOutput {
    pub index: usize,
    pub start: NaiveDateTime,
    pub ticks: Vec<TickRecord>,
    pub events: Vec<Event>,
    pub summary: ReplicateSummary,
}

impl ReplicateOutput {
    pub fn timestamp(&self, tick: u32) -> NaiveDateTime {
        self.start + Duration::minutes(tick as i64 * MINUTES_PER_TICK as i64)
    }
}

/// Maximal runs of `true`, merging runs separated by fewer than `min_gap`
/// `false` entries. Returns inclusive `(first, last)` index pairs.
pub fn raid_episodes(inside: &[bool], min_gap: usize) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for (i, _) in inside.iter().enumerate().filter(|(_, b)| **b) {
        match out.last_mut() {
            Some((_, last)) if i - *last - 1 < min_gap => *last = i,
            _ => out.push((i, i)),
        }
    }
    out
}

/// Runs one replicate; a pure function of `(config, world, index)`.
pub fn run_replicate(config: &RunConfig, world: &World, index: usize) -> Result<ReplicateOutput, EngineError> {
    let stack = &world.stack;
    let header = stack.header();
    let seed = config.run.master_seed;
    let rng_for = |s| ChaCha8Rng::seed_from_u64(stream_seed(seed, index as u64, s));
    let mut food_rng = rng_for(Stream::Food);
    let mut memory_rng = rng_for(Stream::Memory);
    let mut init_rng = rng_for(Stream::Init);
    let mut rng = rng_for(Stream::Behaviour);

    let scenario = config.scenario.resolve();
    let mut food = init_food(stack, &scenario, &mut food_rng);
    let initial_food_kg = food.total();
    let memory = MemoryMatrix::initialise(
        stack,
        &food,
        config.agent.percent_memory,
        config.agent.knowledge_from_fringe,
        &mut memory_rng,
    );
    let heading = init_rng.random_range(-PI..PI);
    let mode = config.run.initial_mode.unwrap_or(if init_rng.random::<bool>() {
        Mode::RandomWalk
    } else {
        Mode::Foraging
    });
    let mut agent = ElephantAgent::new(
        format!("elephant-{index:04}"),
        config.agent.clone(),
        world.start,
        heading,
        mode,
        memory,
    )?;

    let start = NaiveDate::from_ymd_opt(config.run.year, config.run.month, 1)
        .expect("validated")
        .and_hms_opt(0, 0, 0)
        .expect("midnight");
    let total_ticks = config.run.days as usize * TICKS_PER_DAY;
    let mut ticks = Vec::with_capacity(total_ticks);
    let mut events = Vec::new();
    let mut summary = ReplicateSummary {
        index,
        month: config.run.month,
        initial_food_kg,
        ..Default::default()
    };
    let mut consumed = 0.0;
    let mut hourly = None;
    let mut on_water = false;

    for t in 0..total_ticks {
        let now = start + Duration::minutes((t as u32 * MINUTES_PER_TICK) as i64);
        let minute_of_day = (t % TICKS_PER_DAY) as u32 * MINUTES_PER_TICK;
        if t % TICKS_PER_HOUR == 0 || hourly.is_none() {
            let hour = (t / TICKS_PER_HOUR % 24) as u32;
            hourly = Some(hourly_field(&world.temperature, now.month(), hour)?);
        }
        let temperature = hourly.as_ref().expect("set above");
        let disturbance = disturbance_at(&config.disturbance, minute_of_day);
        let env = Surroundings {
            stack,
            temperature,
            disturbance,
        };

        agent.update_danger_to_life(stack, disturbance)?;
        let ambient = temperature.at(agent.cell(header)?);
        let switched = agent.switch_mode(ambient, &mut rng);
        let pursuing = agent.target;
        agent.act(&env, &mut rng)?;
        let cell = agent.cell(header)?;
        let acted = if agent.mode == Mode::Escape {
            Mode::Escape
        } else {
            switched
        };
        if let Some(target) = pursuing {
            if target.kind == TargetKind::Food
                && stack.is_plantation(target.cell)
                && agent.target.is_none()
                && cell == target.cell
            {
                summary.crop_target_visits += 1;
            }
        }

        let (x, y) = agent.position;
        for damage in agent.inflict_damage(cell, stack, &mut rng) {
            let kind = match damage {
                crate::agent::DamageKind::Crop => EventKind::CropDamage,
                crate::agent::DamageKind::Infrastructure => EventKind::InfrastructureDamage,
            };
            events.push(Event {
                tick: t as u32,
                kind,
                x,
                y,
            });
        }
        consumed += agent.eat_food(cell, stack, &mut food, &mut rng);
        let water = agent.drink(cell, stack);
        if water && !on_water {
            summary.water_visits += 1;
            events.push(Event {
                tick: t as u32,
                kind: EventKind::WaterVisit,
                x,
                y,
            });
        }
        on_water = water;
        let alive = agent.deprecate();

        summary.mode_ticks.add(acted);
        if stack.is_plantation(cell) {
            summary.plantation_ticks += 1;
            if acted != Mode::Escape {
                summary.plantation_interior_ticks += 1;
                if config.disturbance.is_day(minute_of_day) {
                    summary.plantation_interior_day_ticks += 1;
                }
            }
        }
        if stack.slope.values[cell] > config.agent.slope_limit {
            summary.steep_ticks += 1;
        }
        ticks.push(TickRecord {
            tick: t as u32,
            x,
            y,
            mode: acted,
            fitness: agent.fitness,
            cell: cell as u32,
            deprived_days: agent.num_days_food_deprivation,
        });

        if !alive {
            summary.died = true;
            summary.death_tick = Some(t);
            events.push(Event {
                tick: t as u32,
                kind: EventKind::Death,
                x,
                y,
            });
            break;
        }
        if t % TICKS_PER_DAY == TICKS_PER_DAY - 1 {
            let r = agent.end_of_day_update();
            summary.daily.push(DailyIntake {
                day: (t / TICKS_PER_DAY) as u32,
                month: now.month(),
                intake: r.intake,
                forest_intake: r.forest_intake,
                crop_intake: r.crop_intake,
                thermoregulation_ticks: r.thermoregulation_ticks,
                thermoregulated_ticks: r.thermoregulated_ticks,
                fitness: r.fitness,
                deprived_days: r.num_days_food_deprivation,
            });
        }
        if (t + 1) % TICKS_PER_YEAR == 0 {
            agent.advance_year();
        }
    }

    let inside: Vec<bool> = ticks.iter().map(|r| stack.is_plantation(r.cell as usize)).collect();
    for (first, last) in raid_episodes(&inside, RAID_GAP_TICKS) {
        let (a, b) = (&ticks[first], &ticks[last]);
        events.push(Event {
            tick: a.tick,
            kind: EventKind::RaidStart,
            x: a.x,
            y: a.y,
        });
        events.push(Event {
            tick: b.tick,
            kind: EventKind::RaidEnd,
            x: b.x,
            y: b.y,
        });
        summary.raid_episodes.push(RaidEpisode {
            start_tick: first,
            end_tick: last,
            deprived_days_at_onset: a.deprived_days,
        });
    }
    events.sort_by_key(|e| e.tick);

    summary.raided = summary.crop_target_visits > 0;
    summary.crop_damage_events = events.iter().filter(|e| e.kind == EventKind::CropDamage).count();
    summary.infrastructure_damage_events = events
        .iter()
        .filter(|e| e.kind == EventKind::InfrastructureDamage)
        .count();
    summary.ticks = ticks.len();
    summary.final_food_kg = food.total();
    summary.consumed_kg = consumed;
    summary.final_fitness = agent.fitness;

    Ok(ReplicateOutput {
        index,
        start,
        ticks,
        events,
        summary,
    })
}
