//! Generative parameter space of the two block animals and the biased
//! samplers that populate it.
//!
//! A scene is fully described by ten continuous attributes plus the class
//! label. Classes overlap on legs' position inside a small interval so that
//! a classifier has an incentive to use the biased attributes: blocks' shape
//! correlates with class away from the overlap (no extra information), while
//! animal color carries extra class information exactly where the legs are
//! ambiguous.

use crate::error::{Error, Result};
use crate::rng::Rng;
use rand::Rng as _;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

/// The two animal classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassLabel {
    /// Mobile leg pair moved inward, under the body.
    Peeky,
    /// Mobile leg pair extended outward.
    Stretchy,
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::Peeky => f.write_str("peeky"),
            ClassLabel::Stretchy => f.write_str("stretchy"),
        }
    }
}

/// The ten resamplable generative attributes (class label is not one).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Attribute {
    LegsPosition,
    Color,
    Shape,
    Background,
    RotationYaw,
    RotationRoll,
    RotationPitch,
    Bending,
    PositionX,
    PositionY,
}

impl Attribute {
    pub const ALL: [Attribute; 10] = [
        Attribute::LegsPosition,
        Attribute::Color,
        Attribute::Shape,
        Attribute::Background,
        Attribute::RotationYaw,
        Attribute::RotationRoll,
        Attribute::RotationPitch,
        Attribute::Bending,
        Attribute::PositionX,
        Attribute::PositionY,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Attribute::LegsPosition => "legs_position",
            Attribute::Color => "color",
            Attribute::Shape => "shape",
            Attribute::Background => "background",
            Attribute::RotationYaw => "rotation_yaw",
            Attribute::RotationRoll => "rotation_roll",
            Attribute::RotationPitch => "rotation_pitch",
            Attribute::Bending => "bending",
            Attribute::PositionX => "position_x",
            Attribute::PositionY => "position_y",
        }
    }

    pub fn parse(s: &str) -> Option<Attribute> {
        Attribute::ALL.into_iter().find(|a| a.name() == s)
    }

    /// Declared value range of the attribute.
    pub fn range(&self) -> (f64, f64) {
        match self {
            Attribute::LegsPosition | Attribute::Color | Attribute::Shape => (0.0, 1.0),
            Attribute::Background => (0.05, 0.95),
            Attribute::RotationYaw => (0.0, 2.0 * PI),
            Attribute::RotationRoll => (-PI / 4.0, PI / 4.0),
            Attribute::RotationPitch => (-PI / 6.0, PI / 6.0),
            Attribute::Bending => (-PI / 10.0, PI / 10.0),
            Attribute::PositionX | Attribute::PositionY => (-0.8, 0.0),
        }
    }

    /// Angles measured modulo 2*pi get circular error metrics.
    pub fn is_circular(&self) -> bool {
        matches!(self, Attribute::RotationYaw)
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Full generative state of one rendered sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneParameters {
    pub class_label: ClassLabel,
    pub legs_position: f64,
    /// 0 = red, 1 = blue.
    pub color: f64,
    /// 0 = cubic, 1 = spherical.
    pub shape: f64,
    /// Background color on the same red-blue scale.
    pub background: f64,
    pub rotation_yaw: f64,
    pub rotation_roll: f64,
    pub rotation_pitch: f64,
    pub bending: f64,
    pub position_x: f64,
    pub position_y: f64,
    pub sample_id: String,
    /// Seed of the per-sample RNG stream that produced this record.
    pub seed: u64,
}

impl SceneParameters {
    pub fn attribute(&self, attr: Attribute) -> f64 {
        match attr {
            Attribute::LegsPosition => self.legs_position,
            Attribute::Color => self.color,
            Attribute::Shape => self.shape,
            Attribute::Background => self.background,
            Attribute::RotationYaw => self.rotation_yaw,
            Attribute::RotationRoll => self.rotation_roll,
            Attribute::RotationPitch => self.rotation_pitch,
            Attribute::Bending => self.bending,
            Attribute::PositionX => self.position_x,
            Attribute::PositionY => self.position_y,
        }
    }

    pub fn set_attribute(&mut self, attr: Attribute, value: f64) {
        match attr {
            Attribute::LegsPosition => self.legs_position = value,
            Attribute::Color => self.color = value,
            Attribute::Shape => self.shape = value,
            Attribute::Background => self.background = value,
            Attribute::RotationYaw => self.rotation_yaw = value,
            Attribute::RotationRoll => self.rotation_roll = value,
            Attribute::RotationPitch => self.rotation_pitch = value,
            Attribute::Bending => self.bending = value,
            Attribute::PositionX => self.position_x = value,
            Attribute::PositionY => self.position_y = value,
        }
    }

    /// All ten attribute values in `Attribute::ALL` order.
    pub fn attribute_vector(&self) -> [f64; 10] {
        let mut out = [0.0; 10];
        for (slot, attr) in out.iter_mut().zip(Attribute::ALL) {
            *slot = self.attribute(attr);
        }
        out
    }
}

/// Distribution specification for one attribute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistSpec {
    Uniform { lo: f64, hi: f64 },
    TruncatedNormal { mean: f64, std: f64, lo: f64, hi: f64 },
    /// Class-conditional pair of specs.
    ClassConditional { peeky: Box<DistSpec>, stretchy: Box<DistSpec> },
}

impl DistSpec {
    fn validate(&self) -> Result<()> {
        match self {
            DistSpec::Uniform { lo, hi } => {
                if !(hi > lo) {
                    return Err(Error::Config(format!("uniform needs hi > lo, got [{lo}, {hi}]")));
                }
            }
            DistSpec::TruncatedNormal { std, lo, hi, .. } => {
                if !(hi > lo) || *std <= 0.0 {
                    return Err(Error::Config(format!(
                        "truncated normal needs hi > lo and std > 0, got std={std}, [{lo}, {hi}]"
                    )));
                }
            }
            DistSpec::ClassConditional { peeky, stretchy } => {
                peeky.validate()?;
                stretchy.validate()?;
            }
        }
        Ok(())
    }

    /// Draws a value; `class` resolves class-conditional specs.
    pub fn sample(&self, class: ClassLabel, rng: &mut Rng) -> Result<f64> {
        match self {
            DistSpec::Uniform { lo, hi } => Ok(rng.gen_range(*lo..*hi)),
            DistSpec::TruncatedNormal { mean, std, lo, hi } => {
                sample_truncated_normal(*mean, *std, *lo, *hi, rng)
            }
            DistSpec::ClassConditional { peeky, stretchy } => match class {
                ClassLabel::Peeky => peeky.sample(class, rng),
                ClassLabel::Stretchy => stretchy.sample(class, rng),
            },
        }
    }
}

/// Rejection sampling with a hard attempt cap; exhaustion is a configuration
/// error (the acceptance region is too small to be practical).
fn sample_truncated_normal(mean: f64, std: f64, lo: f64, hi: f64, rng: &mut Rng) -> Result<f64> {
    for _ in 0..1000 {
        // Box-Muller
        let u1: f64 = rng.gen::<f64>().max(1e-300);
        let u2: f64 = rng.gen();
        let z = (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos();
        let x = mean + std * z;
        if x >= lo && x <= hi {
            return Ok(x);
        }
    }
    Err(Error::Config(format!(
        "truncated normal({mean}, {std}) on [{lo}, {hi}]: rejection cap exhausted"
    )))
}

/// Class-conditional distributions and bias strengths for each attribute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplerConfig {
    /// Interval where both classes are equally likely.
    pub legs_overlap: (f64, f64),
    /// Legs interval outside which the shape bias applies.
    pub shape_neutral_band: (f64, f64),
    /// Mixing weight of the class-leaning triangular shape density.
    pub bias_shape_strength: f64,
    /// Peak mixing weight of the class-leaning triangular color density.
    pub bias_color_strength: f64,
    /// Legs distance from 0.5 at which the color bias has faded to zero.
    pub color_kernel_half_width: f64,
    pub background: DistSpec,
    pub rotation_yaw: DistSpec,
    pub rotation_roll: DistSpec,
    pub rotation_pitch: DistSpec,
    pub bending: DistSpec,
    pub position_x: DistSpec,
    pub position_y: DistSpec,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            legs_overlap: (0.48, 0.52),
            shape_neutral_band: (0.45, 0.55),
            bias_shape_strength: 1.0,
            bias_color_strength: 1.0,
            color_kernel_half_width: 0.15,
            background: DistSpec::Uniform { lo: 0.05, hi: 0.95 },
            rotation_yaw: DistSpec::Uniform { lo: 0.0, hi: 2.0 * PI },
            rotation_roll: DistSpec::TruncatedNormal {
                mean: 0.0,
                std: 0.03 * PI / 4.0,
                lo: -PI / 4.0,
                hi: PI / 4.0,
            },
            rotation_pitch: DistSpec::TruncatedNormal {
                mean: 0.0,
                std: PI / 8.0,
                lo: -PI / 6.0,
                hi: PI / 6.0,
            },
            bending: DistSpec::TruncatedNormal {
                mean: 0.0,
                std: PI / 20.0,
                lo: -PI / 10.0,
                hi: PI / 10.0,
            },
            position_x: DistSpec::Uniform { lo: -0.8, hi: 0.0 },
            position_y: DistSpec::Uniform { lo: -0.8, hi: 0.0 },
        }
    }
}

impl SamplerConfig {
    /// Same attribute marginals with both biases switched off.
    pub fn unbiased() -> Self {
        SamplerConfig { bias_shape_strength: 0.0, bias_color_strength: 0.0, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let (o_lo, o_hi) = self.legs_overlap;
        let (b_lo, b_hi) = self.shape_neutral_band;
        if !(0.0 <= b_lo && b_lo < o_lo && o_lo < o_hi && o_hi < b_hi && b_hi <= 1.0) {
            return Err(Error::Config(format!(
                "need overlap within neutral band within [0, 1]: overlap [{o_lo}, {o_hi}], band [{b_lo}, {b_hi}]"
            )));
        }
        for (name, s) in [
            ("bias_shape_strength", self.bias_shape_strength),
            ("bias_color_strength", self.bias_color_strength),
        ] {
            if !(0.0..=1.0).contains(&s) {
                return Err(Error::Config(format!("{name} must lie in [0, 1], got {s}")));
            }
        }
        if !(self.color_kernel_half_width > 0.0) {
            return Err(Error::Config("color_kernel_half_width must be positive".into()));
        }
        for spec in [
            &self.background,
            &self.rotation_yaw,
            &self.rotation_roll,
            &self.rotation_pitch,
            &self.bending,
            &self.position_x,
            &self.position_y,
        ] {
            spec.validate()?;
        }
        Ok(())
    }

    /// The unconditional (class-independent, unbiased) distribution used for
    /// interventions.
    pub fn unconditional(&self, attr: Attribute) -> DistSpec {
        match attr {
            Attribute::LegsPosition | Attribute::Color | Attribute::Shape => {
                DistSpec::Uniform { lo: 0.0, hi: 1.0 }
            }
            Attribute::Background => self.background.clone(),
            Attribute::RotationYaw => self.rotation_yaw.clone(),
            Attribute::RotationRoll => self.rotation_roll.clone(),
            Attribute::RotationPitch => self.rotation_pitch.clone(),
            Attribute::Bending => self.bending.clone(),
            Attribute::PositionX => self.position_x.clone(),
            Attribute::PositionY => self.position_y.clone(),
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Serde(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: SamplerConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("bad sampler config: {e}")))?;
        config.validate()?;
        Ok(config)
    }
}

/// Triangular density on [0, 1] leaning toward 1: f(s) = 2s.
fn sample_triangular_up(rng: &mut Rng) -> f64 {
    rng.gen::<f64>().sqrt()
}

/// Triangular density on [0, 1] leaning toward 0: f(s) = 2(1 - s).
fn sample_triangular_down(rng: &mut Rng) -> f64 {
    1.0 - rng.gen::<f64>().sqrt()
}

/// Shape: uniform while legs sit in the neutral band; outside it, a
/// bias-strength mixture of uniform and the class-leaning triangular
/// (cubic-leaning on the Peeky side, spherical-leaning on the Stretchy side).
fn sample_shape(config: &SamplerConfig, legs: f64, rng: &mut Rng) -> f64 {
    let (band_lo, band_hi) = config.shape_neutral_band;
    if legs >= band_lo && legs <= band_hi {
        return rng.gen::<f64>();
    }
    if rng.gen::<f64>() >= config.bias_shape_strength {
        return rng.gen::<f64>();
    }
    if legs < band_lo {
        sample_triangular_down(rng)
    } else {
        sample_triangular_up(rng)
    }
}

/// Color: triangular lean fades linearly with the legs' distance from 0.5.
/// Stretchies lean red (0), Peekies lean blue (1); at the kernel's edge the
/// distribution is uniform again.
fn sample_color(config: &SamplerConfig, class: ClassLabel, legs: f64, rng: &mut Rng) -> f64 {
    let weight = config.bias_color_strength
        * (1.0 - (legs - 0.5).abs() / config.color_kernel_half_width).max(0.0);
    if rng.gen::<f64>() >= weight {
        return rng.gen::<f64>();
    }
    match class {
        ClassLabel::Stretchy => sample_triangular_down(rng),
        ClassLabel::Peeky => sample_triangular_up(rng),
    }
}

/// Draws a full scene. Class first, then legs from the class-conditional
/// uniform, so both classes are exactly equally likely inside the overlap.
pub fn sample_scene(config: &SamplerConfig, rng: &mut Rng) -> Result<SceneParameters> {
    config.validate()?;
    let (overlap_lo, overlap_hi) = config.legs_overlap;
    let class = if rng.gen::<bool>() { ClassLabel::Stretchy } else { ClassLabel::Peeky };
    let legs = match class {
        ClassLabel::Peeky => rng.gen_range(0.0..overlap_hi),
        ClassLabel::Stretchy => rng.gen_range(overlap_lo..1.0),
    };
    let color = sample_color(config, class, legs, rng);
    let shape = sample_shape(config, legs, rng);
    Ok(SceneParameters {
        class_label: class,
        legs_position: legs,
        color,
        shape,
        background: config.background.sample(class, rng)?,
        rotation_yaw: config.rotation_yaw.sample(class, rng)?,
        rotation_roll: config.rotation_roll.sample(class, rng)?,
        rotation_pitch: config.rotation_pitch.sample(class, rng)?,
        bending: config.bending.sample(class, rng)?,
        position_x: config.position_x.sample(class, rng)?,
        position_y: config.position_y.sample(class, rng)?,
        sample_id: String::new(),
        seed: 0,
    })
}

/// Result of a single-attribute intervention.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResampleOutcome {
    pub params: SceneParameters,
    /// False when the intervention broke the class/legs coupling; the
    /// operation still succeeds, interventions do that by construction.
    pub class_consistent: bool,
}

/// Redraws one attribute from its unconditional distribution, leaving all
/// other fields (including the class label) untouched.
pub fn resample_attribute(
    params: &SceneParameters,
    attribute: Attribute,
    config: &SamplerConfig,
    rng: &mut Rng,
) -> Result<ResampleOutcome> {
    let spec = config.unconditional(attribute);
    let value = spec.sample(params.class_label, rng)?;
    let mut out = params.clone();
    out.set_attribute(attribute, value);
    let report = validate_scene(&out);
    Ok(ResampleOutcome { params: out, class_consistent: report.class_rule_ok })
}

/// Range and class-rule report for a scene; purely informative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityReport {
    /// Attribute names outside their declared ranges.
    pub range_violations: Vec<String>,
    /// Peeky requires legs <= overlap hi; Stretchy requires legs >= overlap lo.
    pub class_rule_ok: bool,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.range_violations.is_empty() && self.class_rule_ok
    }
}

/// Checks ranges against the declared attribute bounds and the class/legs
/// rule at the default overlap [0.48, 0.52].
pub fn validate_scene(params: &SceneParameters) -> ValidityReport {
    let mut violations = Vec::new();
    for attr in Attribute::ALL {
        let (lo, hi) = attr.range();
        let v = params.attribute(attr);
        if !(lo..=hi).contains(&v) {
            violations.push(attr.name().to_string());
        }
    }
    let class_rule_ok = match params.class_label {
        ClassLabel::Peeky => params.legs_position <= 0.52,
        ClassLabel::Stretchy => params.legs_position >= 0.48,
    };
    ValidityReport { range_violations: violations, class_rule_ok }
}
