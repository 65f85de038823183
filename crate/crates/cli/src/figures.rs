use std::fmt;
use std::str::FromStr;

use farpoint_core::dynamics::{j_band_images, sample_j_by_height};
use farpoint_core::farthest::root_r;
use farpoint_core::hexagon::{a0_triangle, unfold_isometry, voronoi, SHARP_VERTEX, TOP_VERTEX};
use farpoint_core::surface::ROOTS;
use farpoint_core::{GeometryError, PlanePoint, SQRT_3};
use farpoint_service::schema::limit_set_segments;

use crate::svg::Svg;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureId {
    TAndJ,
    FaceLimitSet,
    JIterates,
    HexagonVoronoi,
    PlanSchematic,
}

impl FigureId {
    pub const ALL: [FigureId; 5] = [
        Self::TAndJ,
        Self::FaceLimitSet,
        Self::JIterates,
        Self::HexagonVoronoi,
        Self::PlanSchematic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::TAndJ => "T-and-J",
            Self::FaceLimitSet => "face-limit-set",
            Self::JIterates => "J-iterates",
            Self::HexagonVoronoi => "hexagon-voronoi",
            Self::PlanSchematic => "plan-schematic",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Self::ALL.iter().map(|f| f.name()).collect();
                format!("unknown figure {s:?}; expected one of {}", names.join(", "))
            })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FigureSpec {
    pub id: FigureId,
    /// Points sampled along each curve.
    pub samples: usize,
    /// Number of forward images of `J`.
    pub iterates: usize,
    /// Probe for the hexagon figures, in `T`.
    pub probe: PlanePoint,
    pub width: f64,
}

impl FigureSpec {
    pub fn new(id: FigureId) -> Self {
        Self {
            id,
            samples: 200,
            iterates: 10,
            probe: PlanePoint::new(0.5, 0.25 * SQRT_3 * 0.5),
            width: 800.0,
        }
    }
}

const T_POLY: [PlanePoint; 3] = [PlanePoint::ORIGIN, SHARP_VERTEX, TOP_VERTEX];

fn face_triangle() -> Vec<PlanePoint> {
    ROOTS.to_vec()
}

fn draw_t(svg: &mut Svg, fill: &str) {
    svg.polygon(
        &T_POLY,
        "T",
        &format!("fill:{fill};{}", svg.stroke("#555", 1.0)),
    );
    svg.line(
        PlanePoint::ORIGIN,
        TOP_VERTEX,
        "boundary-inf",
        &svg.stroke("#1565c0", 2.5),
    );
    svg.line(
        SHARP_VERTEX,
        TOP_VERTEX,
        "boundary-inf",
        &svg.stroke("#1565c0", 2.5),
    );
}

fn t_and_j(spec: &FigureSpec) -> String {
    let mut svg = Svg::new(
        "The domain T and the curve J",
        PlanePoint::new(-0.02, -0.02),
        PlanePoint::new(1.02, 0.45),
        spec.width,
    );
    draw_t(&mut svg, "#f4f4f4");
    svg.path(
        "J",
        &sample_j_by_height(spec.samples),
        &svg.stroke("#c62828", 2.5),
    );
    svg.marker(SHARP_VERTEX, 4.0, "cone", "fill:black");
    svg.marker(TOP_VERTEX, 3.0, "top", "fill:#1565c0");
    svg.marker(PlanePoint::new(root_r(), 0.0), 3.0, "r", "fill:#c62828");
    svg.label(PlanePoint::new(root_r(), 0.0), "r", -4.0, 16.0);
    svg.label(PlanePoint::new(0.6, 0.08), "T", 0.0, 0.0);
    svg.label(j_mid(), "J", 8.0, 0.0);
    svg.finish()
}

fn j_mid() -> PlanePoint {
    farpoint_core::dynamics::j_at_height(0.2)
}

fn face_limit_set(spec: &FigureSpec) -> String {
    let tri = face_triangle();
    let mut svg = Svg::fit("Limit set of f in one face", &tri, spec.width);
    svg.polygon(
        &tri,
        "face",
        &format!("fill:#fafafa;{}", svg.stroke("#999", 1.0)),
    );
    svg.polygon(
        &T_POLY,
        "T",
        &format!("fill:#eeeeee;{}", svg.dashed("#999", 1.0, 4.0, 3.0)),
    );
    for s in limit_set_segments() {
        svg.line(s[0], s[1], "limit-set", &svg.stroke("#1565c0", 3.0));
    }
    for (i, r) in ROOTS.iter().enumerate() {
        let name = ["black", "white", "grey"][i];
        svg.marker(*r, 5.0, "cone", &format!("fill:{name};stroke:black"));
    }
    svg.finish()
}

fn j_iterates(spec: &FigureSpec) -> String {
    let mut svg = Svg::new(
        "Iterates of J under the dynamics",
        PlanePoint::new(-0.02, -0.02),
        PlanePoint::new(1.02, 0.45),
        spec.width,
    );
    draw_t(&mut svg, "white");
    let bands = j_band_images(spec.iterates, spec.samples);
    for band in bands.iter().rev() {
        let mut poly = band.left.clone();
        poly.extend(band.right.iter().rev());
        let fill = if band.k % 2 == 1 {
            "#ffcdd2"
        } else {
            "#fff3e0"
        };
        svg.polygon(
            &poly,
            &format!("band k{}", band.k),
            &format!("fill:{fill};{}", svg.stroke("#e57373", 0.5)),
        );
    }
    svg.polygon(
        &T_POLY,
        "T-outline",
        &format!("fill:none;{}", svg.stroke("#555", 1.0)),
    );
    svg.line(
        PlanePoint::ORIGIN,
        TOP_VERTEX,
        "boundary-inf",
        &svg.stroke("#1565c0", 2.5),
    );
    svg.line(
        SHARP_VERTEX,
        TOP_VERTEX,
        "boundary-inf",
        &svg.stroke("#1565c0", 2.5),
    );
    svg.path(
        "J",
        &sample_j_by_height(spec.samples),
        &svg.stroke("#c62828", 2.0),
    );
    svg.finish()
}

const CELL_FILLS: [&str; 6] = [
    "#e3f2fd", "#f3e5f5", "#e8f5e9", "#fff8e1", "#fce4ec", "#e0f7fa",
];

fn hexagon_voronoi(spec: &FigureSpec) -> Result<String, GeometryError> {
    let v = voronoi(spec.probe)?;
    let mut svg = Svg::fit(
        "Hexagon and its Voronoi decomposition",
        &v.hexagon.vertices,
        spec.width,
    );
    for c in &v.cells {
        svg.polygon(
            &c.polygon,
            "cell",
            &format!("fill:{};{}", CELL_FILLS[c.index], svg.stroke("#777", 1.0)),
        );
    }
    svg.polygon(
        &v.hexagon.vertices,
        "hexagon",
        &format!("fill:none;{}", svg.stroke("black", 2.0)),
    );
    svg.polygon(
        &a0_triangle(),
        "a0",
        &format!("fill:none;{}", svg.dashed("#2e7d32", 1.5, 6.0, 4.0)),
    );
    for (j, p) in v.hexagon.vertices.iter().enumerate() {
        svg.marker(*p, 3.5, "vertex", "fill:black");
        svg.label(*p, &format!("p{j}"), 6.0, -6.0);
    }
    for e in &v.essential {
        svg.marker(e.location, 4.5, "essential", "fill:#c62828;stroke:white");
        svg.label(e.location, &e.label.to_string(), 6.0, 14.0);
    }
    Ok(svg.finish())
}

fn plan_schematic(spec: &FigureSpec) -> Result<String, GeometryError> {
    let v = voronoi(spec.probe)?;
    let copies: Vec<Vec<PlanePoint>> = (0..6)
        .map(|j| {
            face_triangle()
                .into_iter()
                .map(|r| unfold_isometry(j).apply(r))
                .collect()
        })
        .collect();
    let all: Vec<PlanePoint> = copies.iter().flatten().copied().collect();
    let mut svg = Svg::fit(
        "Developed copies of the reference face around A0",
        &all,
        spec.width,
    );
    for (j, tri) in copies.iter().enumerate() {
        svg.polygon(
            tri,
            "face-copy",
            &format!("fill:{};{}", CELL_FILLS[j], svg.stroke("#777", 1.0)),
        );
        let c = (tri[0] + tri[1] + tri[2]) * (1.0 / 3.0);
        svg.label(c, &format!("I{j}"), -6.0, 4.0);
    }
    let a0 = a0_triangle();
    svg.polygon(
        &a0,
        "a0",
        &format!("fill:#c8e6c9;{}", svg.stroke("#2e7d32", 2.0)),
    );
    svg.label((a0[0] + a0[1] + a0[2]) * (1.0 / 3.0), "A0", -8.0, 4.0);
    svg.polygon(
        &v.hexagon.vertices,
        "hexagon",
        &format!("fill:none;{}", svg.stroke("black", 1.5)),
    );
    for (j, p) in v.hexagon.vertices.iter().enumerate() {
        svg.marker(*p, 3.0, "vertex", "fill:black");
        svg.label(*p, &format!("p{j}"), 5.0, -5.0);
    }
    Ok(svg.finish())
}

pub fn render(spec: &FigureSpec) -> Result<String, GeometryError> {
    Ok(match spec.id {
        FigureId::TAndJ => t_and_j(spec),
        FigureId::FaceLimitSet => face_limit_set(spec),
        FigureId::JIterates => j_iterates(spec),
        FigureId::HexagonVoronoi => hexagon_voronoi(spec)?,
        FigureId::PlanSchematic => plan_schematic(spec)?,
    })
}
