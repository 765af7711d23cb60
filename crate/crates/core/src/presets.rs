//! Named parameter sets for every figure: planar power sweeps (`fig2.2` ...
//! `fig2.13`, optionally suffixed with a case such as `fig2.4:cn-c`, or a
//! bare case name) and focal scans (`fig3.2a` ... `fig3.11c`).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::maslov::{
    axial_r_max, axial_scan_with, FocalScan, GoMode, Paraboloid, QuadratureOrders, ReflectionTable,
};
use crate::media::{ChiralMedium, DEFAULT_LIMIT_SCALE, DEFAULT_PEC_PERMITTIVITY};
use crate::planar::{Excitation, LayerStack};
use crate::sweep::{default_kappa_grid, default_theta_grid, SweepSpec, SweepVariable};

/// Material family of one layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LayerKind {
    /// `c`: eps_r = 1/eta_r^2, mu_r = 1.
    Chiral,
    /// `cn`: eps_r, mu_r -> 0 at fixed impedance.
    ChiralNihility,
    /// `PEC`: achiral with very large permittivity.
    Pec,
    /// `n`: achiral with vanishing permittivity and permeability.
    Nihility,
}

impl LayerKind {
    fn build(self, eta_r: f64, kappa: f64) -> ChiralMedium {
        match self {
            LayerKind::Chiral => ChiralMedium::from_impedance(eta_r, kappa),
            LayerKind::ChiralNihility => {
                ChiralMedium::chiral_nihility(kappa, eta_r, DEFAULT_LIMIT_SCALE)
            }
            LayerKind::Pec => ChiralMedium::pec_limit(DEFAULT_PEC_PERMITTIVITY),
            LayerKind::Nihility => ChiralMedium::nihility(DEFAULT_LIMIT_SCALE),
        }
    }
}

/// The eight stack cases.
pub const CASES: [&str; 8] = [
    "c-c", "cn-c", "c-cn", "cn-cn", "c-PEC", "cn-PEC", "c-n", "cn-n",
];

pub fn case_layers(case: &str) -> Result<(LayerKind, LayerKind)> {
    use LayerKind::*;
    Ok(match case {
        "c-c" => (Chiral, Chiral),
        "cn-c" => (ChiralNihility, Chiral),
        "c-cn" => (Chiral, ChiralNihility),
        "cn-cn" => (ChiralNihility, ChiralNihility),
        "c-PEC" => (Chiral, Pec),
        "cn-PEC" => (ChiralNihility, Pec),
        "c-n" => (Chiral, Nihility),
        "cn-n" => (ChiralNihility, Nihility),
        _ => return Err(Error::UnknownPreset(case.to_string())),
    })
}

/// Caption parameters shared by a reflected/transmitted figure pair.
#[derive(Debug, Clone, Copy)]
struct FigureParams {
    figures: [&'static str; 2],
    kappa1: f64,
    kappa2: f64,
    eta1: f64,
    eta2: f64,
    variable: SweepVariable,
    theta_deg: f64,
    cases: &'static [&'static str],
}

const PAIR_CASES: &[&str] = &["c-c", "cn-c", "c-cn", "cn-cn"];

const FIGURES: [FigureParams; 6] = [
    FigureParams {
        figures: ["fig2.2", "fig2.3"],
        kappa1: 0.25,
        kappa2: 0.75,
        eta1: 2.0,
        eta2: 2.0,
        variable: SweepVariable::ThetaI,
        theta_deg: 0.0,
        cases: PAIR_CASES,
    },
    FigureParams {
        figures: ["fig2.4", "fig2.5"],
        kappa1: 0.25,
        kappa2: 0.25,
        eta1: 1.0,
        eta2: 2.0,
        variable: SweepVariable::ThetaI,
        theta_deg: 0.0,
        cases: PAIR_CASES,
    },
    FigureParams {
        figures: ["fig2.6", "fig2.7"],
        kappa1: 0.0,
        kappa2: 0.25,
        eta1: 2.0,
        eta2: 2.0,
        variable: SweepVariable::Kappa1,
        theta_deg: 45.0,
        cases: PAIR_CASES,
    },
    FigureParams {
        figures: ["fig2.8", "fig2.9"],
        kappa1: 0.25,
        kappa2: 0.0,
        eta1: 2.0,
        eta2: 2.0,
        variable: SweepVariable::Kappa2,
        theta_deg: 45.0,
        cases: PAIR_CASES,
    },
    FigureParams {
        figures: ["fig2.10", "fig2.11"],
        kappa1: 0.0,
        kappa2: 0.0,
        eta1: 2.0,
        eta2: 1.0,
        variable: SweepVariable::Kappa1,
        theta_deg: 45.0,
        cases: &["c-PEC", "cn-PEC"],
    },
    FigureParams {
        figures: ["fig2.12", "fig2.13"],
        kappa1: 0.0,
        kappa2: 0.0,
        eta1: 2.0,
        eta2: 1.0,
        variable: SweepVariable::Kappa1,
        theta_deg: 45.0,
        cases: &["c-n", "cn-n"],
    },
];

/// A planar sweep preset: a stack plus the figure's swept variable.
#[derive(Debug, Clone, Serialize)]
pub struct PlanarPreset {
    pub name: String,
    pub case: &'static str,
    pub stack: LayerStack,
    pub variable: SweepVariable,
    /// Fixed incidence angle (degrees) for chirality sweeps.
    pub theta_deg: f64,
}

impl PlanarPreset {
    /// Sweep over the default grid with parallel-polarized excitation.
    pub fn sweep_spec(&self) -> SweepSpec {
        let grid = match self.variable {
            SweepVariable::ThetaI => default_theta_grid(),
            _ => default_kappa_grid(),
        };
        SweepSpec::new(
            self.variable,
            grid,
            self.stack,
            Excitation::parallel(self.theta_deg.to_radians()),
        )
        .expect("preset sweeps are valid")
    }
}

fn figure_params(tag: &str) -> Option<FigureParams> {
    FIGURES.iter().copied().find(|f| f.figures.contains(&tag))
}

fn build(params: &FigureParams, case: &'static str, k0: f64) -> Result<LayerStack> {
    let (a, b) = case_layers(case)?;
    LayerStack::quarter_wave(
        a.build(params.eta1, params.kappa1),
        b.build(params.eta2, params.kappa2),
        k0,
    )
}

/// Stack for `case` with the caption parameters of `figure` (`fig2.x`).
/// Without a figure tag the pair cases use Figure 2.2's parameters and
/// the limiting cases Figure 2.10/2.12's with kappa1 = 0.25.
pub fn preset(case: &str, figure: Option<&str>) -> Result<LayerStack> {
    Ok(planar_preset(&match figure {
        Some(f) => format!("{f}:{case}"),
        None => case.to_string(),
    })?
    .stack)
}

fn canonical_case(case: &str) -> Result<&'static str> {
    CASES
        .iter()
        .copied()
        .find(|c| *c == case)
        .ok_or_else(|| Error::UnknownPreset(case.to_string()))
}

/// Looks up a planar preset by name (`fig2.4`, `fig2.4:cn-c` or `cn-c`).
pub fn planar_preset(name: &str) -> Result<PlanarPreset> {
    let k0 = 1.0;
    let unknown = || Error::UnknownPreset(name.to_string());
    let (fig, case) = match name.split_once(':') {
        Some((f, c)) => (Some(f), Some(c)),
        None if name.starts_with("fig") => (Some(name), None),
        None => (None, Some(name)),
    };
    match fig {
        Some(tag) => {
            let params = figure_params(tag).ok_or_else(unknown)?;
            let case = match case {
                Some(c) => canonical_case(c)?,
                None => params.cases[0],
            };
            if !params.cases.contains(&case) {
                return Err(unknown());
            }
            Ok(PlanarPreset {
                name: name.to_string(),
                case,
                stack: build(&params, case, k0)?,
                variable: params.variable,
                theta_deg: params.theta_deg,
            })
        }
        None => {
            let case = canonical_case(case.unwrap_or_default())?;
            let mut params = if PAIR_CASES.contains(&case) {
                FIGURES[0]
            } else if case.ends_with("PEC") {
                FIGURES[4]
            } else {
                FIGURES[5]
            };
            if !PAIR_CASES.contains(&case) {
                params.kappa1 = 0.25;
            }
            Ok(PlanarPreset {
                name: name.to_string(),
                case,
                stack: build(&params, case, k0)?,
                variable: SweepVariable::ThetaI,
                theta_deg: 0.0,
            })
        }
    }
}

/// Every planar preset name: the eight bare cases, then each figure tag
/// followed by its per-case variants.
pub fn planar_preset_names() -> Vec<String> {
    let mut names: Vec<String> = CASES.iter().map(|c| c.to_string()).collect();
    for f in FIGURES.iter() {
        for tag in f.figures {
            names.push(tag.to_string());
            names.extend(f.cases.iter().map(|c| format!("{tag}:{c}")));
        }
    }
    names
}

/// What the paraboloid is made of.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reflector {
    Stack(LayerStack),
    /// Perfect mirror with `B_par = B_perp = -1`.
    IdealMirror,
}

/// A focal-scan preset: reflector material plus the default geometry
/// `(k0, f, H) = (1, 100, pi/4)`.
#[derive(Debug, Clone, Serialize)]
pub struct FocalPreset {
    pub name: String,
    pub case: &'static str,
    pub reflector: Reflector,
    pub paraboloid: Paraboloid,
    pub k0: f64,
    /// Parameter varied across the figure's a/b/c variants, with its value.
    pub varied: Option<(&'static str, f64)>,
}

impl FocalPreset {
    /// Sampling-rule orders for an axial scan over `kz_grid`.
    pub fn default_orders(&self, kz_grid: &[f64]) -> QuadratureOrders {
        let p = &self.paraboloid;
        QuadratureOrders::minimum(self.k0, p.f, p.h(), axial_r_max(p, self.k0, kz_grid))
    }

    pub fn reflection_table(&self, n_alpha: usize) -> Result<ReflectionTable> {
        let h = self.paraboloid.h();
        match &self.reflector {
            Reflector::Stack(s) => ReflectionTable::from_stack(s, h, n_alpha),
            Reflector::IdealMirror => ReflectionTable::ideal_mirror(h, n_alpha),
        }
    }

    pub fn scan(
        &self,
        kz_grid: &[f64],
        orders: QuadratureOrders,
        mode: GoMode,
    ) -> Result<FocalScan> {
        let table = self.reflection_table(orders.n_alpha)?;
        axial_scan_with(
            &self.paraboloid,
            &table,
            kz_grid,
            self.k0,
            orders.n_gamma,
            mode,
        )
    }
}

pub const FOCAL_F: f64 = 100.0;
pub const FOCAL_H: f64 = std::f64::consts::FRAC_PI_4;

#[derive(Debug, Clone, Copy)]
enum Varied {
    Eps1,
    Eps2,
    D1,
    D2,
    Kappa1,
    Kappa2,
}

impl Varied {
    fn name(self) -> &'static str {
        match self {
            Varied::Eps1 => "eps_r1",
            Varied::Eps2 => "eps_r2",
            Varied::D1 => "d1",
            Varied::D2 => "d2",
            Varied::Kappa1 => "kappa1",
            Varied::Kappa2 => "kappa2",
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct FocalFamily {
    figure: &'static str,
    case: &'static str,
    eps1: f64,
    kappa1: f64,
    eps2: f64,
    kappa2: f64,
    varied: Varied,
    values: [f64; 3],
}

const QW: f64 = std::f64::consts::FRAC_PI_2;

const FOCAL_FAMILIES: [FocalFamily; 10] = [
    FocalFamily {
        figure: "fig3.2",
        case: "c-c",
        eps1: 6.0,
        kappa1: 0.75,
        eps2: 6.0,
        kappa2: 0.75,
        varied: Varied::Eps1,
        values: [4.0, 6.0, 8.0],
    },
    FocalFamily {
        figure: "fig3.3",
        case: "c-c",
        eps1: 6.0,
        kappa1: 0.75,
        eps2: 6.0,
        kappa2: 0.75,
        varied: Varied::Eps2,
        values: [4.0, 6.0, 8.0],
    },
    FocalFamily {
        figure: "fig3.4",
        case: "c-c",
        eps1: 6.0,
        kappa1: 0.75,
        eps2: 6.0,
        kappa2: 0.75,
        varied: Varied::D1,
        values: [0.5 * QW, QW, 1.5 * QW],
    },
    FocalFamily {
        figure: "fig3.5",
        case: "c-c",
        eps1: 6.0,
        kappa1: 0.75,
        eps2: 6.0,
        kappa2: 0.75,
        varied: Varied::D2,
        values: [0.5 * QW, QW, 1.5 * QW],
    },
    FocalFamily {
        figure: "fig3.6",
        case: "c-c",
        eps1: 6.0,
        kappa1: 0.75,
        eps2: 6.0,
        kappa2: 0.75,
        varied: Varied::Kappa1,
        values: [0.5, 0.75, 1.0],
    },
    FocalFamily {
        figure: "fig3.7",
        case: "c-c",
        eps1: 6.0,
        kappa1: 0.75,
        eps2: 6.0,
        kappa2: 0.75,
        varied: Varied::Kappa2,
        values: [0.5, 0.75, 1.0],
    },
    FocalFamily {
        figure: "fig3.8",
        case: "c-PEC",
        eps1: 6.0,
        kappa1: 0.75,
        eps2: DEFAULT_PEC_PERMITTIVITY,
        kappa2: 0.0,
        varied: Varied::Eps1,
        values: [4.0, 6.0, 8.0],
    },
    FocalFamily {
        figure: "fig3.9",
        case: "c-PEC",
        eps1: 4.0,
        kappa1: 1.7,
        eps2: DEFAULT_PEC_PERMITTIVITY,
        kappa2: 0.0,
        varied: Varied::Kappa1,
        values: [1.5, 1.7, 1.9],
    },
    FocalFamily {
        figure: "fig3.10",
        case: "c-n",
        eps1: 6.0,
        kappa1: 0.6,
        eps2: DEFAULT_LIMIT_SCALE,
        kappa2: 0.0,
        varied: Varied::Eps1,
        values: [4.0, 6.0, 8.0],
    },
    FocalFamily {
        figure: "fig3.11",
        case: "c-n",
        eps1: 6.0,
        kappa1: 0.7,
        eps2: DEFAULT_LIMIT_SCALE,
        kappa2: 0.0,
        varied: Varied::Kappa1,
        values: [0.5, 0.7, 0.9],
    },
];

/// Name of the ideal-mirror focal preset.
pub const IDEAL_MIRROR: &str = "ideal-mirror";

fn focal_paraboloid() -> Paraboloid {
    Paraboloid::from_aperture_angle(FOCAL_F, FOCAL_H).expect("static geometry")
}

fn family_stack(fam: &FocalFamily, value: f64) -> Result<LayerStack> {
    let (mut eps1, mut kappa1, mut eps2, mut kappa2, mut d1, mut d2) =
        (fam.eps1, fam.kappa1, fam.eps2, fam.kappa2, QW, QW);
    match fam.varied {
        Varied::Eps1 => eps1 = value,
        Varied::Eps2 => eps2 = value,
        Varied::D1 => d1 = value,
        Varied::D2 => d2 = value,
        Varied::Kappa1 => kappa1 = value,
        Varied::Kappa2 => kappa2 = value,
    }
    let layer2 = match fam.case {
        "c-n" => ChiralMedium::nihility(eps2),
        _ => ChiralMedium::chiral(eps2, 1.0, kappa2),
    };
    LayerStack::new(ChiralMedium::chiral(eps1, 1.0, kappa1), d1, layer2, d2, 1.0)
}

/// Looks up a focal preset (`fig3.2a` ... `fig3.11c`, or `ideal-mirror`).
/// Suffixes a/b/c select the increasing parameter values of the figure.
pub fn focal_preset(name: &str) -> Result<FocalPreset> {
    let unknown = || Error::UnknownPreset(name.to_string());
    if name == IDEAL_MIRROR {
        return Ok(FocalPreset {
            name: name.to_string(),
            case: IDEAL_MIRROR,
            reflector: Reflector::IdealMirror,
            paraboloid: focal_paraboloid(),
            k0: 1.0,
            varied: None,
        });
    }
    let (tag, idx) = match name.as_bytes().last() {
        Some(b'a') => (&name[..name.len() - 1], 0),
        Some(b'b') => (&name[..name.len() - 1], 1),
        Some(b'c') => (&name[..name.len() - 1], 2),
        _ => return Err(unknown()),
    };
    let fam = FOCAL_FAMILIES
        .iter()
        .find(|f| f.figure == tag)
        .ok_or_else(unknown)?;
    let value = fam.values[idx];
    Ok(FocalPreset {
        name: name.to_string(),
        case: fam.case,
        reflector: Reflector::Stack(family_stack(fam, value)?),
        paraboloid: focal_paraboloid(),
        k0: 1.0,
        varied: Some((fam.varied.name(), value)),
    })
}

/// Every focal preset name.
pub fn focal_preset_names() -> Vec<String> {
    let mut names = vec![IDEAL_MIRROR.to_string()];
    for f in FOCAL_FAMILIES.iter() {
        names.extend(["a", "b", "c"].iter().map(|s| format!("{}{s}", f.figure)));
    }
    names
}

/// The three presets of a focal figure (`fig3.2` -> a, b, c).
pub fn focal_family(figure: &str) -> Result<[FocalPreset; 3]> {
    Ok([
        focal_preset(&format!("{figure}a"))?,
        focal_preset(&format!("{figure}b"))?,
        focal_preset(&format!("{figure}c"))?,
    ])
}
