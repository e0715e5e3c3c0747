use std::fmt;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::directions::{DirectionCosts, DirectionSet};
use super::memory::MemoryMatrix;
use super::movement::{bearing, displacement, StepSampler};
use super::physiology::{
    body_weight, daily_dry_matter_intake, food_increment, thermoregulation_increment, thermoregulation_probability,
};
use super::{AgentError, AgentParams, SwitchOrder};
use crate::environment::{FoodGrid, HourlyTemperature};
use crate::terrain::{GridHeader, TerrainStack};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "random-walk")]
    RandomWalk,
    #[serde(rename = "foraging")]
    Foraging,
    #[serde(rename = "thermoregulation")]
    Thermoregulation,
    #[serde(rename = "escape-mode")]
    Escape,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::RandomWalk, Mode::Foraging, Mode::Thermoregulation, Mode::Escape];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::RandomWalk => "random-walk",
            Mode::Foraging => "foraging",
            Mode::Thermoregulation => "thermoregulation",
            Mode::Escape => "escape-mode",
        }
    }

    pub fn parse(s: &str) -> Option<Mode> {
        Mode::ALL.into_iter().find(|m| m.as_str() == s)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetKind {
    Food,
    /// Water or a cell cooler than the threshold.
    Refuge,
    /// Forest shade, used when no refuge is in reach.
    Shade,
    Escape,
}

impl TargetKind {
    fn serves(self, mode: Mode) -> bool {
        matches!(
            (self, mode),
            (TargetKind::Food, Mode::Foraging)
                | (TargetKind::Refuge | TargetKind::Shade, Mode::Thermoregulation)
                | (TargetKind::Escape, Mode::Escape)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target {
    pub cell: usize,
    pub x: f64,
    pub y: f64,
    pub kind: TargetKind,
}

/// Which kind of target to look for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetRequest {
    Food,
    Thermoregulate,
    Escape,
}

/// What the agent sees during one tick.
#[derive(Debug, Clone, Copy)]
pub struct Surroundings<'a> {
    pub stack: &'a TerrainStack,
    pub temperature: &'a HourlyTemperature,
    pub disturbance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Moved,
    /// Stayed put on purpose (resting in a refuge, target already reached).
    Rested,
    /// The proposed step was refused (domain edge or plantation guard).
    Refused,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DamageKind {
    Crop,
    Infrastructure,
}

/// End-of-day bookkeeping, returned before the daily counters reset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DayReport {
    pub intake: f64,
    pub forest_intake: f64,
    pub crop_intake: f64,
    pub thermoregulation_ticks: u32,
    pub thermoregulated_ticks: u32,
    pub food_increment: f64,
    pub thermoregulation_increment: f64,
    pub fitness: f64,
    pub num_days_food_deprivation: u32,
    pub num_days_water_source_visit: u32,
}

#[derive(Debug, Clone)]
pub struct ElephantAgent {
    pub id: String,
    pub params: AgentParams,
    pub age: f64,
    pub body_weight: f64,
    pub daily_dry_matter_intake: f64,
    pub position: (f64, f64),
    /// Compass heading in radians.
    pub heading: f64,
    pub mode: Mode,
    pub target: Option<Target>,
    pub fitness: f64,
    pub aggression: f64,
    pub memory: MemoryMatrix,
    pub num_days_food_deprivation: u32,
    /// Days since the last visit to a water cell.
    pub num_days_water_source_visit: u32,
    pub danger_to_life: bool,
    pub food_habituation: bool,
    pub disturbance_tolerance: f64,
    pub todays_intake: f64,
    pub todays_forest_intake: f64,
    pub todays_crop_intake: f64,
    pub thermoregulation_steps_today: u32,
    pub thermoregulated_steps_today: u32,
    pub visited_water_today: bool,
    pub alive: bool,
    sampler: StepSampler,
}

impl ElephantAgent {
    pub fn new(
        id: impl Into<String>,
        params: AgentParams,
        position: (f64, f64),
        heading: f64,
        mode: Mode,
        memory: MemoryMatrix,
    ) -> Result<Self, AgentError> {
        params.validate()?;
        let bw = body_weight(params.age);
        Ok(Self {
            id: id.into(),
            age: params.age,
            body_weight: bw,
            daily_dry_matter_intake: daily_dry_matter_intake(bw),
            position,
            heading,
            mode,
            target: None,
            fitness: params.initial_fitness,
            aggression: params.aggression,
            memory,
            num_days_food_deprivation: 0,
            num_days_water_source_visit: 0,
            danger_to_life: false,
            food_habituation: params.food_habituation,
            disturbance_tolerance: params.disturbance_tolerance,
            todays_intake: 0.0,
            todays_forest_intake: 0.0,
            todays_crop_intake: 0.0,
            thermoregulation_steps_today: 0,
            thermoregulated_steps_today: 0,
            visited_water_today: false,
            alive: params.initial_fitness > 0.0,
            sampler: StepSampler::new(&params.movement),
            params,
        })
    }

    pub fn cell(&self, header: &GridHeader) -> Result<usize, AgentError> {
        header
            .index_of(self.position.0, self.position.1)
            .ok_or(AgentError::OutsideDomain {
                x: self.position.0,
                y: self.position.1,
            })
    }

    pub fn update_danger_to_life(&mut self, stack: &TerrainStack, disturbance: f64) -> Result<bool, AgentError> {
        let cell = self.cell(stack.header())?;
        self.danger_to_life = stack.is_plantation(cell) && disturbance > self.disturbance_tolerance;
        Ok(self.danger_to_life)
    }

    pub fn thermoregulation_probability(&self, ambient: f64) -> f64 {
        thermoregulation_probability(
            ambient,
            self.params.thermoregulation_threshold,
            self.params.thermoregulation_state,
        )
    }

    /// Picks this tick's behavioural mode.
    pub fn switch_mode<R: Rng + ?Sized>(&mut self, ambient: f64, rng: &mut R) -> Mode {
        let escaping = self.mode == Mode::Escape && self.target.is_some_and(|t| t.kind == TargetKind::Escape);
        let next = if self.danger_to_life || escaping {
            Mode::Escape
        } else {
            let starving = self.fitness < self.params.fitness_threshold;
            let hot = self.thermoregulation_probability(ambient) > 0.5;
            match (self.params.switch_order, starving, hot) {
                (SwitchOrder::FitnessFirst, true, _) | (SwitchOrder::TemperatureFirst, true, false) => Mode::Foraging,
                (_, _, true) => Mode::Thermoregulation,
                _ => self.markov_draw(rng),
            }
        };
        if self.target.is_some_and(|t| !t.kind.serves(next)) {
            self.target = None;
        }
        self.mode = next;
        next
    }

    fn markov_draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Mode {
        let u: f64 = rng.random();
        let m = &self.params.movement;
        match self.mode {
            Mode::Foraging if u < m.p22 => Mode::Foraging,
            Mode::Foraging => Mode::RandomWalk,
            _ if u < m.p11 => Mode::RandomWalk,
            _ => Mode::Foraging,
        }
    }

    pub fn feasible_directions(&self, stack: &TerrainStack) -> Result<DirectionSet, AgentError> {
        let (r, c) = stack.header().row_col(self.cell(stack.header())?);
        let costs = DirectionCosts::compute(&stack.slope, r, c, self.params.terrain_radius, self.params.slope_limit);
        Ok(costs.feasible(self.params.tolerance))
    }

    /// Chooses a target of the requested kind, or `None` when nothing qualifies.
    pub fn select_target<R: Rng + ?Sized>(
        &self,
        request: TargetRequest,
        env: &Surroundings,
        rng: &mut R,
    ) -> Result<Option<Target>, AgentError> {
        let feasible = self.feasible_directions(env.stack)?;
        let picked = match request {
            TargetRequest::Food => self.food_target(feasible, env, rng),
            TargetRequest::Thermoregulate => self.thermoregulation_target(feasible, env, rng),
            TargetRequest::Escape => self.escape_target(feasible, env, rng)?,
        };
        Ok(picked.map(|(cell, kind)| {
            let (x, y) = env.stack.header().index_center(cell);
            Target { cell, x, y, kind }
        }))
    }

    fn food_target<R: Rng + ?Sized>(
        &self,
        feasible: DirectionSet,
        env: &Surroundings,
        rng: &mut R,
    ) -> Option<(usize, TargetKind)> {
        let stack = env.stack;
        let half = stack.header().cellsize / 2.0;
        let mut candidates = Vec::new();
        let (mut forest_food, mut crop_food) = (0.0, 0.0);
        for (cell, dist, b) in cells_within(stack.header(), self.position, self.params.radius_food_search) {
            let Some(kg) = self.memory.get(cell).filter(|kg| *kg > 0.0) else {
                continue;
            };
            if stack.is_plantation(cell) {
                crop_food += kg;
            } else {
                forest_food += kg;
            }
            if dist < half || feasible.contains_bearing(b) {
                candidates.push(cell);
            }
        }
        if candidates.is_empty() {
            return None;
        }
        let starved = self.num_days_food_deprivation > self.params.threshold_num_days;
        let abundant = self.food_habituation && crop_food > 0.5 * forest_food;
        let cell = if (starved || abundant) && rng.random::<f64>() < self.aggression {
            let prox = |c: &usize| stack.proximity_plantation.values[*c];
            let best = candidates.iter().map(prox).fold(f64::INFINITY, f64::min);
            let nearest: Vec<usize> = candidates.into_iter().filter(|c| prox(c) == best).collect();
            *nearest.choose(rng)?
        } else {
            *candidates.choose(rng)?
        };
        Some((cell, TargetKind::Food))
    }

    fn thermoregulation_target<R: Rng + ?Sized>(
        &self,
        feasible: DirectionSet,
        env: &Surroundings,
        rng: &mut R,
    ) -> Option<(usize, TargetKind)> {
        let stack = env.stack;
        let half = stack.header().cellsize / 2.0;
        let threshold = self.params.thermoregulation_threshold;
        let mut refuges = Vec::new();
        let mut shade = Vec::new();
        for (cell, dist, b) in cells_within(stack.header(), self.position, self.params.radius_forest_search) {
            if !(dist < half || feasible.contains_bearing(b)) {
                continue;
            }
            let water = dist <= self.params.radius_water_search && stack.is_water(cell);
            if water || env.temperature.at(cell) < threshold {
                refuges.push(cell);
            } else if stack.is_forest(cell) {
                shade.push(cell);
            }
        }
        if let Some(c) = refuges.choose(rng) {
            return Some((*c, TargetKind::Refuge));
        }
        shade.choose(rng).map(|c| (*c, TargetKind::Shade))
    }

    fn escape_target<R: Rng + ?Sized>(
        &self,
        feasible: DirectionSet,
        env: &Surroundings,
        rng: &mut R,
    ) -> Result<Option<(usize, TargetKind)>, AgentError> {
        let stack = env.stack;
        let half = stack.header().cellsize / 2.0;
        let radius = self.params.radius_forest_search;
        let forest: Vec<(usize, bool)> = cells_within(stack.header(), self.position, radius)
            .filter(|(c, _, _)| stack.is_forest(*c))
            .map(|(c, d, b)| (c, d < half || feasible.contains_bearing(b)))
            .collect();
        let open: Vec<usize> = forest.iter().filter(|(_, ok)| *ok).map(|(c, _)| *c).collect();
        let pool = if open.is_empty() {
            forest.iter().map(|(c, _)| *c).collect()
        } else {
            open
        };
        if let Some(c) = pool.choose(rng) {
            return Ok(Some((*c, TargetKind::Escape)));
        }
        // no forest in reach: head for the in-reach cell closest to forest
        let here = stack.proximity_forest.values[self.cell(stack.header())?];
        let closer = cells_within(stack.header(), self.position, radius)
            .filter(|(c, _, _)| stack.proximity_forest.values[*c] < here)
            .min_by(|a, b| {
                let pa = stack.proximity_forest.values[a.0];
                let pb = stack.proximity_forest.values[b.0];
                pa.total_cmp(&pb).then(a.1.total_cmp(&b.1)).then(a.0.cmp(&b.0))
            });
        Ok(closer.map(|(c, _, _)| (c, TargetKind::Escape)))
    }

    /// Carries out the current mode for one tick.
    pub fn act<R: Rng + ?Sized>(&mut self, env: &Surroundings, rng: &mut R) -> Result<StepOutcome, AgentError> {
        let cell = self.cell(env.stack.header())?;
        match self.mode {
            Mode::RandomWalk => self.encamped_step(env, rng),
            Mode::Foraging => {
                if !self.target.is_some_and(|t| t.kind == TargetKind::Food) {
                    self.target = self.select_target(TargetRequest::Food, env, rng)?;
                }
                match self.target {
                    None => self.encamped_step(env, rng),
                    Some(t) if env.stack.is_plantation(t.cell) && env.disturbance > self.disturbance_tolerance => {
                        // raiding in daylight is too dangerous; retreat instead
                        self.mode = Mode::Escape;
                        self.target = self.select_target(TargetRequest::Escape, env, rng)?;
                        self.pursue_or_wander(env, rng)
                    }
                    Some(_) => self.pursue(env, rng),
                }
            }
            Mode::Thermoregulation => {
                self.thermoregulation_steps_today += 1;
                if self.is_refuge(cell, env) || self.shaded(cell, env) {
                    self.thermoregulated_steps_today += 1;
                    return Ok(StepOutcome::Rested);
                }
                if !self.target.is_some_and(|t| t.kind.serves(Mode::Thermoregulation)) {
                    self.target = self.select_target(TargetRequest::Thermoregulate, env, rng)?;
                    if self.target.is_some_and(|t| t.kind == TargetKind::Shade) && env.stack.is_forest(cell) {
                        // already under canopy: rest here
                        let (x, y) = env.stack.header().index_center(cell);
                        self.target = Some(Target {
                            cell,
                            x,
                            y,
                            kind: TargetKind::Shade,
                        });
                        self.thermoregulated_steps_today += 1;
                        return Ok(StepOutcome::Rested);
                    }
                }
                self.pursue_or_wander(env, rng)
            }
            Mode::Escape => {
                if !self.target.is_some_and(|t| t.kind == TargetKind::Escape) {
                    self.target = self.select_target(TargetRequest::Escape, env, rng)?;
                }
                self.pursue_or_wander(env, rng)
            }
        }
    }

    fn is_refuge(&self, cell: usize, env: &Surroundings) -> bool {
        env.stack.is_water(cell) || env.temperature.at(cell) < self.params.thermoregulation_threshold
    }

    fn shaded(&self, cell: usize, env: &Surroundings) -> bool {
        self.target.is_some_and(|t| t.kind == TargetKind::Shade) && env.stack.is_forest(cell)
    }

    fn pursue_or_wander<R: Rng + ?Sized>(
        &mut self,
        env: &Surroundings,
        rng: &mut R,
    ) -> Result<StepOutcome, AgentError> {
        if self.target.is_some() {
            self.pursue(env, rng)
        } else {
            self.encamped_step(env, rng)
        }
    }

    fn reach_target(&mut self) {
        self.target = None;
        self.mode = Mode::RandomWalk;
    }

    fn guarded(&self, env: &Surroundings, cell: usize) -> bool {
        self.mode != Mode::Escape && env.stack.is_plantation(cell) && env.disturbance > self.disturbance_tolerance
    }

    /// One exploratory step toward the current target, never overshooting it.
    fn pursue<R: Rng + ?Sized>(&mut self, env: &Surroundings, rng: &mut R) -> Result<StepOutcome, AgentError> {
        let t = self.target.expect("pursue needs a target");
        let half = env.stack.header().cellsize / 2.0;
        let dist = distance(self.position, (t.x, t.y));
        if dist < half {
            self.reach_target();
            return Ok(StepOutcome::Rested);
        }
        let (len, heading) = self.sampler.exploratory(self.position, (t.x, t.y), rng);
        let outcome = self.try_move(len.min(dist), heading, env);
        if outcome == StepOutcome::Moved && distance(self.position, (t.x, t.y)) < half {
            self.reach_target();
        }
        Ok(outcome)
    }

    /// One encamped step, turned onto a feasible direction when the sampled
    /// heading points into steep terrain.
    fn encamped_step<R: Rng + ?Sized>(&mut self, env: &Surroundings, rng: &mut R) -> Result<StepOutcome, AgentError> {
        let (len, mut heading) = self.sampler.encamped(self.heading, rng);
        let feasible = self.feasible_directions(env.stack)?;
        if !feasible.contains_bearing(heading) {
            let dirs: Vec<_> = feasible.iter().collect();
            heading = dirs.choose(rng).expect("feasible set is never empty").bearing();
        }
        Ok(self.try_move(len, heading, env))
    }

    fn try_move(&mut self, len: f64, heading: f64, env: &Surroundings) -> StepOutcome {
        self.heading = heading;
        let (dx, dy) = displacement(len, heading);
        let next = (self.position.0 + dx, self.position.1 + dy);
        match env.stack.header().index_of(next.0, next.1) {
            Some(cell) if !self.guarded(env, cell) => {
                self.position = next;
                StepOutcome::Moved
            }
            _ => StepOutcome::Refused,
        }
    }

    /// Eats a uniform share of the food on `cell`, keeping memory in step
    /// with the landscape.
    pub fn eat_food<R: Rng + ?Sized>(
        &mut self,
        cell: usize,
        stack: &TerrainStack,
        food: &mut FoodGrid,
        rng: &mut R,
    ) -> f64 {
        let available = food.get(cell);
        if available <= 0.0 {
            return 0.0;
        }
        let eaten = food.take(cell, available * rng.random::<f64>());
        self.memory.sync(cell, food.get(cell));
        self.todays_intake += eaten;
        if stack.is_plantation(cell) {
            self.todays_crop_intake += eaten;
        } else {
            self.todays_forest_intake += eaten;
        }
        eaten
    }

    /// Records a water visit; returns whether the cell is water.
    pub fn drink(&mut self, cell: usize, stack: &TerrainStack) -> bool {
        let water = stack.is_water(cell);
        self.visited_water_today |= water;
        water
    }

    pub fn inflict_damage<R: Rng + ?Sized>(&self, cell: usize, stack: &TerrainStack, rng: &mut R) -> Vec<DamageKind> {
        let mut events = Vec::new();
        if stack.is_agri_plot(cell) && rng.random::<f64>() < self.params.prob_crop_damage {
            events.push(DamageKind::Crop);
        }
        if stack.is_building(cell) && rng.random::<f64>() < self.params.prob_infrastructure_damage {
            events.push(DamageKind::Infrastructure);
        }
        events
    }

    /// Per-tick movement cost; returns whether the agent is still alive.
    pub fn deprecate(&mut self) -> bool {
        self.fitness = (self.fitness - self.params.movement_fitness_deprecation).max(0.0);
        if self.fitness <= 0.0 {
            self.alive = false;
        }
        self.alive
    }

    pub fn end_of_day_update(&mut self) -> DayReport {
        let a = self.thermoregulation_steps_today;
        let y = self.thermoregulated_steps_today;
        let x = self.todays_intake;
        let fi = food_increment(a, x, self.daily_dry_matter_intake);
        let ti = thermoregulation_increment(a, y);
        if self.alive {
            self.fitness = (self.fitness + fi + ti).clamp(0.0, 1.0);
        }
        if self.fitness <= 0.0 {
            self.alive = false;
        }
        if x < self.daily_dry_matter_intake {
            self.num_days_food_deprivation += 1;
        } else {
            self.num_days_food_deprivation = 0;
        }
        if self.visited_water_today {
            self.num_days_water_source_visit = 0;
        } else {
            self.num_days_water_source_visit += 1;
        }
        let report = DayReport {
            intake: x,
            forest_intake: self.todays_forest_intake,
            crop_intake: self.todays_crop_intake,
            thermoregulation_ticks: a,
            thermoregulated_ticks: y,
            food_increment: fi,
            thermoregulation_increment: ti,
            fitness: self.fitness,
            num_days_food_deprivation: self.num_days_food_deprivation,
            num_days_water_source_visit: self.num_days_water_source_visit,
        };
        self.todays_intake = 0.0;
        self.todays_forest_intake = 0.0;
        self.todays_crop_intake = 0.0;
        self.thermoregulation_steps_today = 0;
        self.thermoregulated_steps_today = 0;
        self.visited_water_today = false;
        report
    }

    pub fn advance_year(&mut self) {
        self.age += 1.0;
        self.body_weight = body_weight(self.age);
        self.daily_dry_matter_intake = daily_dry_matter_intake(self.body_weight);
    }
}

fn distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

/// Cells whose centres lie within `radius` of `pos`, with distance and
/// compass bearing, in row-major order.
pub fn cells_within(h: &GridHeader, pos: (f64, f64), radius: f64) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
    let cs = h.cellsize;
    let top = h.yll + h.nrows as f64 * cs;
    let clamp_row = |y: f64| (((top - y) / cs).floor().max(0.0) as usize).min(h.nrows - 1);
    let clamp_col = |x: f64| (((x - h.xll) / cs).floor().max(0.0) as usize).min(h.ncols - 1);
    let (r0, r1) = (clamp_row(pos.1 + radius), clamp_row(pos.1 - radius));
    let (c0, c1) = (clamp_col(pos.0 - radius), clamp_col(pos.0 + radius));
    (r0..=r1)
        .flat_map(move |r| (c0..=c1).map(move |c| (r, c)))
        .filter_map(move |(r, c)| {
            let centre = h.cell_center(r, c);
            let d = distance(pos, centre);
            (d <= radius).then(|| (h.index(r, c), d, bearing(pos, centre)))
        })
}
