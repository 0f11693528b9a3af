//! Synthetic corruptions: random removal of points and injection of outliers,
//! plus the affine and noise families, each at severities 1 through 5.
//!
//! All severity constants live in [`CorruptionSchedule`].

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::{Rotation3, Unit};
use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::fixtures::random_unit_vector;
use crate::geometry::{Point, PointCloud, Vector};
use crate::resampling::center_neighborhood;
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorruptionFamily {
    Scale,
    Jitter,
    DropGlobal,
    DropLocal,
    AddGlobal,
    AddLocal,
    Rotate,
}

impl CorruptionFamily {
    pub const ALL: [CorruptionFamily; 7] = [
        CorruptionFamily::Scale,
        CorruptionFamily::Jitter,
        CorruptionFamily::DropGlobal,
        CorruptionFamily::DropLocal,
        CorruptionFamily::AddGlobal,
        CorruptionFamily::AddLocal,
        CorruptionFamily::Rotate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CorruptionFamily::Scale => "scale",
            CorruptionFamily::Jitter => "jitter",
            CorruptionFamily::DropGlobal => "drop_global",
            CorruptionFamily::DropLocal => "drop_local",
            CorruptionFamily::AddGlobal => "add_global",
            CorruptionFamily::AddLocal => "add_local",
            CorruptionFamily::Rotate => "rotate",
        }
    }
}

impl fmt::Display for CorruptionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CorruptionFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('-', "_");
        Ok(match norm.as_str() {
            "scale" => CorruptionFamily::Scale,
            "jitter" => CorruptionFamily::Jitter,
            "drop_global" | "drop_g" => CorruptionFamily::DropGlobal,
            "drop_local" | "drop_l" => CorruptionFamily::DropLocal,
            "add_global" | "add_g" => CorruptionFamily::AddGlobal,
            "add_local" | "add_l" => CorruptionFamily::AddLocal,
            "rotate" => CorruptionFamily::Rotate,
            _ => return Err(Error::param(format!("unknown corruption family '{s}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorruptionSpec {
    family: CorruptionFamily,
    severity: u8,
    seed: u64,
}

impl CorruptionSpec {
    pub fn new(family: CorruptionFamily, severity: u8, seed: u64) -> Result<Self> {
        if !(1..=5).contains(&severity) {
            return Err(Error::param(format!("severity must lie in 1..=5, got {severity}")));
        }
        Ok(Self {
            family,
            severity,
            seed,
        })
    }

    pub fn family(&self) -> CorruptionFamily {
        self.family
    }

    pub fn severity(&self) -> u8 {
        self.severity
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Per-severity-step constants. With `s` the severity:
///
/// | family      | effect                                                        |
/// |-------------|---------------------------------------------------------------|
/// | scale       | per-axis factor log-uniform in `[1/(1+a s), 1+a s]`           |
/// | jitter      | Gaussian offset, `sigma = b s` per coordinate                  |
/// | drop_global | remove `round(c s N)` uniformly                               |
/// | drop_local  | `s` patches of `round(d N)` nearest points each               |
/// | add_global  | `round(e s N)` uniform points in `[-h, h]^3`                  |
/// | add_local   | `round(f s N)` points in `s` Gaussian blobs (`sigma = g`)      |
/// | rotate      | angle uniform in `[0, t s]` about a uniform axis              |
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorruptionSchedule {
    pub scale_step: f64,
    pub jitter_sigma_step: f64,
    pub drop_global_fraction_step: f64,
    pub drop_local_patch_fraction: f64,
    pub add_global_fraction_step: f64,
    pub add_global_half_width: f64,
    pub add_local_fraction_step: f64,
    pub add_local_sigma: f64,
    pub rotate_degrees_step: f64,
}

impl Default for CorruptionSchedule {
    fn default() -> Self {
        Self {
            scale_step: 0.1,
            jitter_sigma_step: 0.01,
            drop_global_fraction_step: 0.15,
            drop_local_patch_fraction: 0.05,
            add_global_fraction_step: 0.1,
            add_global_half_width: 1.0,
            add_local_fraction_step: 0.1,
            add_local_sigma: 0.05,
            rotate_degrees_step: 15.0,
        }
    }
}

/// Centers on the centroid and scales to unit maximum norm, unless the cloud
/// already lies inside the closed unit ball.
pub fn normalize_unit_sphere(cloud: &PointCloud) -> Result<PointCloud> {
    let max_norm = cloud
        .points()
        .iter()
        .map(|p| p.coords.norm())
        .fold(0.0, f64::max);
    if max_norm <= 1.0 + 1e-9 {
        return Ok(cloud.clone());
    }
    let c = cloud.centroid();
    let radius = cloud
        .points()
        .iter()
        .map(|p| (p - c).norm())
        .fold(0.0, f64::max);
    let (points, normals) = cloud.clone().into_parts();
    let points = points.into_iter().map(|p| Point::from((p - c) / radius)).collect();
    match normals {
        Some(n) => PointCloud::with_normals(points, n),
        None => PointCloud::new(points),
    }
}

pub fn corrupt(cloud: &PointCloud, spec: &CorruptionSpec) -> Result<PointCloud> {
    corrupt_with(cloud, spec, &CorruptionSchedule::default())
}

pub fn corrupt_with(cloud: &PointCloud, spec: &CorruptionSpec, schedule: &CorruptionSchedule) -> Result<PointCloud> {
    let cloud = normalize_unit_sphere(cloud)?;
    let s = spec.severity as f64;
    let n = cloud.len();
    let mut rng = rng_from_seed(spec.seed);

    match spec.family {
        CorruptionFamily::Scale => {
            let hi = (1.0 + schedule.scale_step * s).ln();
            let factors = Vector::from_fn(|_, _| rng.random_range(-hi..=hi).exp());
            let points = cloud
                .points()
                .iter()
                .map(|p| Point::from(p.coords.component_mul(&factors)))
                .collect();
            match cloud.normals() {
                Some(normals) => {
                    let normals = normals
                        .iter()
                        .map(|nv| nv.component_div(&factors).normalize())
                        .collect();
                    PointCloud::with_normals(points, normals)
                }
                None => PointCloud::new(points),
            }
        }
        CorruptionFamily::Jitter => {
            let noise = Normal::new(0.0, schedule.jitter_sigma_step * s)
                .map_err(|e| Error::param(e.to_string()))?;
            let points = cloud
                .points()
                .iter()
                .map(|p| {
                    let dx = noise.sample(&mut rng);
                    let dy = noise.sample(&mut rng);
                    let dz = noise.sample(&mut rng);
                    Point::new(p.x + dx, p.y + dy, p.z + dz)
                })
                .collect();
            PointCloud::new(points)
        }
        CorruptionFamily::DropGlobal => {
            let remove = (schedule.drop_global_fraction_step * s * n as f64).round() as usize;
            check_removal(remove, n)?;
            let mut removed = vec![false; n];
            for i in index::sample(&mut rng, n, remove) {
                removed[i] = true;
            }
            let kept: Vec<usize> = (0..n).filter(|&i| !removed[i]).collect();
            cloud.select(&kept)
        }
        CorruptionFamily::DropLocal => {
            let patch = (schedule.drop_local_patch_fraction * n as f64).round() as usize;
            let patches = spec.severity as usize;
            check_removal(patch * patches, n)?;
            let mut current = cloud;
            for _ in 0..patches {
                if patch == 0 {
                    break;
                }
                let center = rng.random_range(0..current.len());
                let mut removed = vec![false; current.len()];
                for i in center_neighborhood(&current, center, patch) {
                    removed[i] = true;
                }
                let kept: Vec<usize> = (0..current.len()).filter(|&i| !removed[i]).collect();
                current = current.select(&kept)?;
            }
            Ok(current)
        }
        CorruptionFamily::AddGlobal => {
            let add = (schedule.add_global_fraction_step * s * n as f64).round() as usize;
            let h = schedule.add_global_half_width;
            let extra: Vec<Point> = (0..add)
                .map(|_| {
                    Point::new(
                        rng.random_range(-h..=h),
                        rng.random_range(-h..=h),
                        rng.random_range(-h..=h),
                    )
                })
                .collect();
            append(&cloud, extra)
        }
        CorruptionFamily::AddLocal => {
            let add = (schedule.add_local_fraction_step * s * n as f64).round() as usize;
            let blobs = spec.severity as usize;
            let noise = Normal::new(0.0, schedule.add_local_sigma)
                .map_err(|e| Error::param(e.to_string()))?;
            let centers: Vec<Point> = (0..blobs)
                .map(|_| *cloud.point(rng.random_range(0..n)))
                .collect();
            let mut extra = Vec::with_capacity(add);
            for (b, c) in centers.iter().enumerate() {
                let count = add / blobs + usize::from(b < add % blobs);
                for _ in 0..count {
                    let dx = noise.sample(&mut rng);
                    let dy = noise.sample(&mut rng);
                    let dz = noise.sample(&mut rng);
                    extra.push(Point::new(c.x + dx, c.y + dy, c.z + dz));
                }
            }
            append(&cloud, extra)
        }
        CorruptionFamily::Rotate => {
            let max_angle = (schedule.rotate_degrees_step * s).to_radians();
            let angle = rng.random_range(0.0..=max_angle);
            let axis = Unit::new_unchecked(random_unit_vector(&mut rng));
            let rot = Rotation3::from_axis_angle(&axis, angle);
            let points = cloud.points().iter().map(|p| rot * p).collect();
            match cloud.normals() {
                Some(normals) => {
                    let normals = normals.iter().map(|nv| (rot * nv).normalize()).collect();
                    PointCloud::with_normals(points, normals)
                }
                None => PointCloud::new(points),
            }
        }
    }
}

fn check_removal(remove: usize, n: usize) -> Result<()> {
    if remove >= n {
        return Err(Error::param(format!(
            "corruption would remove {remove} of {n} points"
        )));
    }
    Ok(())
}

fn append(cloud: &PointCloud, extra: Vec<Point>) -> Result<PointCloud> {
    let mut points = cloud.points().to_vec();
    points.extend(extra);
    PointCloud::new(points)
}

/// Parses a fixture manifest: one `family severity seed` triple per line.
/// Blank lines and `#` comments are ignored.
pub fn parse_manifest(text: &str, path: &Path) -> Result<Vec<CorruptionSpec>> {
    let mut specs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: lineno + 1,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(format!("expected 'family severity seed', got '{line}'")));
        }
        let family = fields[0]
            .parse::<CorruptionFamily>()
            .map_err(|e| parse_err(e.to_string()))?;
        let severity = fields[1]
            .parse::<u8>()
            .map_err(|_| parse_err(format!("bad severity '{}'", fields[1])))?;
        let seed = fields[2]
            .parse::<u64>()
            .map_err(|_| parse_err(format!("bad seed '{}'", fields[2])))?;
        specs.push(CorruptionSpec::new(family, severity, seed).map_err(|e| parse_err(e.to_string()))?);
    }
    Ok(specs)
}
