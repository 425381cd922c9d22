//! JSON specifications of bodies, functions and densities. Each spec
//! parses from JSON with path-tagged errors, builds the library object and
//! serializes back to a canonical form with every optional field filled.

use serde_json::Value;
use vallab_core::affine::{Profile, SmoothBody2};
use vallab_core::fconv::{conjugate_max_affine, Cell, MaxAffineFunc, PolyhedralFunc};
use vallab_core::fval::DensityFunc;
use vallab_core::geom::{ball_polygon, ball_polytope, hull, Polytope, Vector};

use crate::error::{CliError, CliResult};
use crate::json::{object, real, reals, rows};

/// A JSON value together with its location in the document.
struct Node<'a> {
    value: &'a Value,
    path: String,
}

impl<'a> Node<'a> {
    fn root(value: &'a Value) -> Self {
        Node { value, path: "$".into() }
    }

    fn fail<T>(&self, reason: impl Into<String>) -> CliResult<T> {
        Err(CliError::parse(&self.path, reason))
    }

    fn opt(&self, key: &str) -> CliResult<Option<Node<'a>>> {
        let Some(map) = self.value.as_object() else { return self.fail("expected an object") };
        Ok(map.get(key).filter(|v| !v.is_null()).map(|value| Node { value, path: format!("{}.{key}", self.path) }))
    }

    fn get(&self, key: &str) -> CliResult<Node<'a>> {
        match self.opt(key)? {
            Some(n) => Ok(n),
            None => Err(CliError::parse(&format!("{}.{key}", self.path), "missing field")),
        }
    }

    fn items(&self) -> CliResult<Vec<Node<'a>>> {
        let Some(items) = self.value.as_array() else { return self.fail("expected an array") };
        Ok(items.iter().enumerate().map(|(i, value)| Node { value, path: format!("{}[{i}]", self.path) }).collect())
    }

    fn real(&self) -> CliResult<f64> {
        match self.value.as_f64() {
            Some(x) if x.is_finite() => Ok(x),
            _ => self.fail("expected a finite number"),
        }
    }

    fn count(&self) -> CliResult<usize> {
        match self.value.as_u64() {
            Some(k) => Ok(k as usize),
            None => self.fail("expected a non-negative integer"),
        }
    }

    fn text(&self) -> CliResult<&'a str> {
        match self.value.as_str() {
            Some(s) => Ok(s),
            None => self.fail("expected a string"),
        }
    }

    fn reals(&self) -> CliResult<Vec<f64>> {
        self.items()?.iter().map(Node::real).collect()
    }

    /// Array of points, each with `dim` coordinates.
    fn points(&self, dim: usize) -> CliResult<Vec<Vec<f64>>> {
        self.items()?
            .iter()
            .map(|p| {
                let x = p.reals()?;
                if x.len() != dim {
                    return p.fail(format!("expected {dim} coordinates, found {}", x.len()));
                }
                Ok(x)
            })
            .collect()
    }

    fn vector(&self, dim: usize) -> CliResult<Vec<f64>> {
        let x = self.reals()?;
        if x.len() != dim {
            return self.fail(format!("expected {dim} coordinates, found {}", x.len()));
        }
        Ok(x)
    }
}

fn parse_text(text: &str) -> CliResult<Value> {
    serde_json::from_str(text).map_err(|e| CliError::parse("$", e.to_string()))
}

fn to_vector(x: &[f64]) -> Vector {
    Vector::from_column_slice(x)
}

fn to_vectors(points: &[Vec<f64>]) -> Vec<Vector> {
    points.iter().map(|p| to_vector(p)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum BodySpec {
    Vertices {
        dim: usize,
        points: Vec<Vec<f64>>,
    },
    /// `[0, s_1] × … × [0, s_n]`.
    Box {
        dim: usize,
        sides: Vec<f64>,
    },
    /// Ordered vertices `p_0, …, p_n`.
    Simplex {
        dim: usize,
        vertices: Vec<Vec<f64>>,
    },
    RegularPolygon {
        k: usize,
        radius: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
        angle: f64,
        center: [f64; 2],
    },
    BallPoly {
        dim: usize,
        k: usize,
        radius: f64,
    },
}

#[derive(Debug, Clone)]
pub enum Body {
    Polytope(Polytope),
    Smooth(SmoothBody2),
}

impl Body {
    pub fn polytope(&self) -> CliResult<&Polytope> {
        match self {
            Body::Polytope(p) => Ok(p),
            Body::Smooth(_) => Err(CliError::Validation("a polytope is required, got a smooth body".into())),
        }
    }

    /// The body as a planar support profile.
    pub fn smooth(&self) -> CliResult<SmoothBody2> {
        match self {
            Body::Smooth(k) => Ok(k.clone()),
            Body::Polytope(p) if p.dim() == 2 => {
                Ok(SmoothBody2::polygon(p.vertices().iter().map(|v| [v[0], v[1]]).collect())?)
            }
            Body::Polytope(p) => {
                Err(CliError::Validation(format!("a planar body is required, got dimension {}", p.dim())))
            }
        }
    }
}

impl BodySpec {
    pub fn parse(text: &str) -> CliResult<Self> {
        Self::from_node(&Node::root(&parse_text(text)?))
    }

    pub fn from_value(value: &Value) -> CliResult<Self> {
        Self::from_node(&Node::root(value))
    }

    fn from_node(node: &Node) -> CliResult<Self> {
        let dim_node = node.get("dim")?;
        let dim = dim_node.count()?;
        if dim == 0 {
            return dim_node.fail("dimension must be positive");
        }
        let kind = node.get("kind")?;
        let planar = |what: &str| -> CliResult<()> {
            if dim != 2 {
                return dim_node.fail(format!("{what} requires dim 2"));
            }
            Ok(())
        };
        Ok(match kind.text()? {
            "vertices" => BodySpec::Vertices { dim, points: node.get("points")?.points(dim)? },
            "box" => BodySpec::Box { dim, sides: node.get("sides")?.vector(dim)? },
            "simplex" => {
                let vertices = match (node.opt("vertices")?, node.opt("scale")?) {
                    (Some(v), _) => v.points(dim)?,
                    (None, Some(s)) => {
                        let s = s.real()?;
                        (0..=dim).map(|i| (0..dim).map(|j| if i == j + 1 { s } else { 0.0 }).collect()).collect()
                    }
                    (None, None) => return Err(CliError::parse(&format!("{}.vertices", node.path), "missing field")),
                };
                if vertices.len() != dim + 1 {
                    return node.fail(format!("a {dim}-simplex needs {} vertices, found {}", dim + 1, vertices.len()));
                }
                BodySpec::Simplex { dim, vertices }
            }
            "regular_polygon" => {
                planar("regular_polygon")?;
                BodySpec::RegularPolygon { k: node.get("k")?.count()?, radius: node.get("radius")?.real()? }
            }
            "ellipse" => {
                planar("ellipse")?;
                let center = match node.opt("center")? {
                    Some(c) => {
                        let c = c.vector(2)?;
                        [c[0], c[1]]
                    }
                    None => [0.0, 0.0],
                };
                let angle = node.opt("angle")?.map(|a| a.real()).transpose()?.unwrap_or(0.0);
                BodySpec::Ellipse { a: node.get("a")?.real()?, b: node.get("b")?.real()?, angle, center }
            }
            "ball_poly" => BodySpec::BallPoly { dim, k: node.get("k")?.count()?, radius: node.get("radius")?.real()? },
            other => return kind.fail(format!("unknown body kind {other:?}")),
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            BodySpec::Vertices { dim, .. }
            | BodySpec::Box { dim, .. }
            | BodySpec::Simplex { dim, .. }
            | BodySpec::BallPoly { dim, .. } => *dim,
            BodySpec::RegularPolygon { .. } | BodySpec::Ellipse { .. } => 2,
        }
    }

    pub fn to_value(&self) -> Value {
        let dim = ("dim", Value::from(self.dim()));
        match self {
            BodySpec::Vertices { points, .. } => object([dim, ("kind", "vertices".into()), ("points", rows(points))]),
            BodySpec::Box { sides, .. } => object([dim, ("kind", "box".into()), ("sides", reals(sides))]),
            BodySpec::Simplex { vertices, .. } => {
                object([dim, ("kind", "simplex".into()), ("vertices", rows(vertices))])
            }
            BodySpec::RegularPolygon { k, radius } => {
                object([dim, ("kind", "regular_polygon".into()), ("k", Value::from(*k)), ("radius", real(*radius))])
            }
            BodySpec::Ellipse { a, b, angle, center } => object([
                dim,
                ("kind", "ellipse".into()),
                ("a", real(*a)),
                ("b", real(*b)),
                ("angle", real(*angle)),
                ("center", reals(center)),
            ]),
            BodySpec::BallPoly { k, radius, .. } => {
                object([dim, ("kind", "ball_poly".into()), ("k", Value::from(*k)), ("radius", real(*radius))])
            }
        }
    }

    pub fn build(&self) -> CliResult<Body> {
        Ok(match self {
            BodySpec::Vertices { points, .. } => Body::Polytope(hull(&to_vectors(points))?),
            BodySpec::Box { sides, .. } => Body::Polytope(hull(Polytope::from_sides(sides)?.vertices())?),
            BodySpec::Simplex { vertices, .. } => Body::Polytope(Polytope::simplex(&to_vectors(vertices))?),
            BodySpec::RegularPolygon { k, radius } => Body::Polytope(ball_polygon(*k, *radius)?.polytope),
            BodySpec::Ellipse { a, b, angle, center } => {
                Body::Smooth(SmoothBody2::new(Profile::Ellipse { a: *a, b: *b, angle: *angle })?.translate(*center))
            }
            BodySpec::BallPoly { dim: 1, radius, .. } => {
                Body::Polytope(hull(&[to_vector(&[-radius]), to_vector(&[*radius])])?)
            }
            BodySpec::BallPoly { dim: 2, k, radius } => Body::Polytope(ball_polygon(*k, *radius)?.polytope),
            BodySpec::BallPoly { dim, k, radius } => Body::Polytope(ball_polytope(*dim, *k, *radius)?.polytope),
        })
    }

    /// Ordered vertex list for the kinds that carry one.
    pub fn ordered_vertices(&self) -> CliResult<Vec<Vector>> {
        match self {
            BodySpec::Simplex { vertices, .. } | BodySpec::Vertices { points: vertices, .. } => {
                Ok(to_vectors(vertices))
            }
            _ => Err(CliError::Validation("an explicit vertex list is required".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// The max-affine function itself, as a function to be valuated.
    Primal,
    /// Its conjugate, a function with bounded domain.
    Conjugate,
    /// Kept as a max-affine function.
    MaxAffine,
}

impl Role {
    fn as_str(&self) -> &'static str {
        match self {
            Role::Primal => "primal",
            Role::Conjugate => "conjugate",
            Role::MaxAffine => "max_affine",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellSpec {
    pub points: Vec<Vec<f64>>,
    pub slope: Vec<f64>,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FuncSpec {
    Cells { dim: usize, cells: Vec<CellSpec> },
    MaxAffine { dim: usize, pieces: Vec<(Vec<f64>, f64)>, interval: Option<(f64, f64)>, role: Role },
    Gauge { body: BodySpec },
    Indicator { body: BodySpec },
    LinearIndicator { y: Vec<f64>, body: BodySpec },
    RadialQuadratic { dim: usize, c: f64 },
}

#[derive(Debug, Clone)]
pub enum Func {
    Polyhedral(PolyhedralFunc),
    MaxAffine(MaxAffineFunc),
    /// `c|x|²/2` on ℝⁿ.
    RadialQuadratic {
        dim: usize,
        c: f64,
    },
}

impl Func {
    pub fn polyhedral(&self) -> CliResult<&PolyhedralFunc> {
        match self {
            Func::Polyhedral(u) => Ok(u),
            Func::MaxAffine(_) => {
                Err(CliError::Validation("a polyhedral function is required; use role \"primal\"".into()))
            }
            Func::RadialQuadratic { .. } => {
                Err(CliError::Validation("a polyhedral function is required, got radial_quadratic".into()))
            }
        }
    }

    pub fn max_affine(&self) -> CliResult<&MaxAffineFunc> {
        match self {
            Func::MaxAffine(v) => Ok(v),
            _ => Err(CliError::Validation("a max_affine function with role \"max_affine\" is required".into())),
        }
    }
}

impl FuncSpec {
    pub fn parse(text: &str) -> CliResult<Self> {
        Self::from_node(&Node::root(&parse_text(text)?))
    }

    fn from_node(node: &Node) -> CliResult<Self> {
        let kind = node.get("kind")?;
        let declared = node.opt("dim")?.map(|d| d.count()).transpose()?;
        let body = || -> CliResult<BodySpec> {
            let b = node.get("body")?;
            let spec = BodySpec::from_node(&b)?;
            if let Some(d) = declared {
                if d != spec.dim() {
                    return node.get("dim")?.fail(format!("dim {d} does not match the body dimension {}", spec.dim()));
                }
            }
            Ok(spec)
        };
        let need_dim = || declared.ok_or_else(|| CliError::parse(&format!("{}.dim", node.path), "missing field"));
        Ok(match kind.text()? {
            "cells" => {
                let dim = need_dim()?;
                let cells = node
                    .get("cells")?
                    .items()?
                    .iter()
                    .map(|c| {
                        Ok(CellSpec {
                            points: c.get("points")?.points(dim)?,
                            slope: c.get("slope")?.vector(dim)?,
                            offset: c.get("offset")?.real()?,
                        })
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                FuncSpec::Cells { dim, cells }
            }
            "max_affine" => {
                let dim = need_dim()?;
                let pieces = node
                    .get("pieces")?
                    .items()?
                    .iter()
                    .map(|p| Ok((p.get("slope")?.vector(dim)?, p.get("offset")?.real()?)))
                    .collect::<CliResult<Vec<_>>>()?;
                let interval = match node.opt("interval")? {
                    Some(i) => {
                        let ends = i.vector(2)?;
                        Some((ends[0], ends[1]))
                    }
                    None => None,
                };
                let role = match node.opt("role")? {
                    None => Role::Primal,
                    Some(r) => match r.text()? {
                        "primal" => Role::Primal,
                        "conjugate" => Role::Conjugate,
                        "max_affine" => Role::MaxAffine,
                        other => return r.fail(format!("unknown role {other:?}")),
                    },
                };
                FuncSpec::MaxAffine { dim, pieces, interval, role }
            }
            "gauge" => FuncSpec::Gauge { body: body()? },
            "indicator" => FuncSpec::Indicator { body: body()? },
            "linear_indicator" => {
                let body = body()?;
                FuncSpec::LinearIndicator { y: node.get("y")?.vector(body.dim())?, body }
            }
            "radial_quadratic" => FuncSpec::RadialQuadratic { dim: need_dim()?, c: node.get("c")?.real()? },
            other => return kind.fail(format!("unknown function kind {other:?}")),
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            FuncSpec::Cells { dim, .. } | FuncSpec::MaxAffine { dim, .. } | FuncSpec::RadialQuadratic { dim, .. } => {
                *dim
            }
            FuncSpec::Gauge { body } | FuncSpec::Indicator { body } | FuncSpec::LinearIndicator { body, .. } => {
                body.dim()
            }
        }
    }

    pub fn to_value(&self) -> Value {
        let dim = ("dim", Value::from(self.dim()));
        match self {
            FuncSpec::Cells { cells, .. } => {
                let cells = cells
                    .iter()
                    .map(|c| {
                        object([("points", rows(&c.points)), ("slope", reals(&c.slope)), ("offset", real(c.offset))])
                    })
                    .collect();
                object([dim, ("kind", "cells".into()), ("cells", Value::Array(cells))])
            }
            FuncSpec::MaxAffine { pieces, interval, role, .. } => {
                let pieces = pieces.iter().map(|(s, o)| object([("slope", reals(s)), ("offset", real(*o))])).collect();
                let mut fields = vec![
                    dim,
                    ("kind", "max_affine".into()),
                    ("pieces", Value::Array(pieces)),
                    ("role", role.as_str().into()),
                ];
                if let Some((lo, hi)) = interval {
                    fields.push(("interval", reals(&[*lo, *hi])));
                }
                object(fields)
            }
            FuncSpec::Gauge { body } => object([dim, ("kind", "gauge".into()), ("body", body.to_value())]),
            FuncSpec::Indicator { body } => object([dim, ("kind", "indicator".into()), ("body", body.to_value())]),
            FuncSpec::LinearIndicator { y, body } => {
                object([dim, ("kind", "linear_indicator".into()), ("y", reals(y)), ("body", body.to_value())])
            }
            FuncSpec::RadialQuadratic { c, .. } => object([dim, ("kind", "radial_quadratic".into()), ("c", real(*c))]),
        }
    }

    pub fn build(&self) -> CliResult<Func> {
        let body = |b: &BodySpec| -> CliResult<Polytope> { Ok(b.build()?.polytope()?.clone()) };
        Ok(match self {
            FuncSpec::Cells { cells, .. } => {
                let cells = cells
                    .iter()
                    .map(|c| Ok(Cell::bounded(hull(&to_vectors(&c.points))?, to_vector(&c.slope), c.offset)))
                    .collect::<CliResult<Vec<_>>>()?;
                Func::Polyhedral(PolyhedralFunc::from_cells(cells)?)
            }
            FuncSpec::MaxAffine { pieces, interval, role, .. } => {
                let pieces: Vec<(Vector, f64)> = pieces.iter().map(|(s, o)| (to_vector(s), *o)).collect();
                let v = match interval {
                    Some((lo, hi)) => MaxAffineFunc::on_interval(pieces, *lo, *hi)?,
                    None => MaxAffineFunc::new(pieces)?,
                };
                match role {
                    Role::Primal => {
                        let u = v.to_polyhedral()?;
                        u.coercivity_witness()?;
                        Func::Polyhedral(u)
                    }
                    Role::Conjugate => Func::Polyhedral(conjugate_max_affine(&v)?),
                    Role::MaxAffine => Func::MaxAffine(v),
                }
            }
            FuncSpec::Gauge { body: b } => Func::Polyhedral(PolyhedralFunc::gauge(&body(b)?)?),
            FuncSpec::Indicator { body: b } => Func::Polyhedral(PolyhedralFunc::indicator(&body(b)?)),
            FuncSpec::LinearIndicator { y, body: b } => {
                Func::Polyhedral(PolyhedralFunc::linear_plus_indicator(&to_vector(y), &body(b)?)?)
            }
            FuncSpec::RadialQuadratic { dim, c } => {
                if *c <= 0.0 {
                    return Err(CliError::Validation(format!("radial_quadratic needs c > 0, got {c}")));
                }
                Func::RadialQuadratic { dim: *dim, c: *c }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DensitySpec {
    Hat { center: Vec<f64>, radius: f64, height: f64 },
    Grid { axes: Vec<Vec<f64>>, values: Vec<f64> },
    HalfLine { breakpoints: Vec<f64>, values: Vec<f64> },
}

impl DensitySpec {
    pub fn parse(text: &str) -> CliResult<Self> {
        let value = parse_text(text)?;
        let node = Node::root(&value);
        let kind = node.get("kind")?;
        Ok(match kind.text()? {
            "hat" => DensitySpec::Hat {
                center: node.get("center")?.reals()?,
                radius: node.get("radius")?.real()?,
                height: node.get("height")?.real()?,
            },
            "grid" => DensitySpec::Grid {
                axes: node.get("axes")?.items()?.iter().map(Node::reals).collect::<CliResult<_>>()?,
                values: node.get("values")?.reals()?,
            },
            "half_line" => DensitySpec::HalfLine {
                breakpoints: node.get("breakpoints")?.reals()?,
                values: node.get("values")?.reals()?,
            },
            other => return kind.fail(format!("unknown density kind {other:?}")),
        })
    }

    pub fn to_value(&self) -> Value {
        match self {
            DensitySpec::Hat { center, radius, height } => object([
                ("kind", "hat".into()),
                ("center", reals(center)),
                ("radius", real(*radius)),
                ("height", real(*height)),
            ]),
            DensitySpec::Grid { axes, values } => {
                object([("kind", "grid".into()), ("axes", rows(axes)), ("values", reals(values))])
            }
            DensitySpec::HalfLine { breakpoints, values } => {
                object([("kind", "half_line".into()), ("breakpoints", reals(breakpoints)), ("values", reals(values))])
            }
        }
    }

    pub fn build(&self) -> CliResult<DensityFunc> {
        Ok(match self {
            DensitySpec::Hat { center, radius, height } => DensityFunc::hat(&to_vector(center), *radius, *height)?,
            DensitySpec::Grid { axes, values } => DensityFunc::grid(axes.clone(), values.clone())?,
            DensitySpec::HalfLine { breakpoints, values } => {
                DensityFunc::half_line(breakpoints.clone(), values.clone())?
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::json::to_string;

    fn canonical_body(text: &str) -> String {
        to_string(&BodySpec::parse(text).unwrap().to_value())
    }

    #[test]
    fn bodies_round_trip() {
        for text in [
            r#"{"dim":2,"kind":"box","sides":[1,1]}"#,
            r#"{"dim":2,"kind":"regular_polygon","k":256,"radius":1}"#,
            r#"{"dim":2,"kind":"vertices","points":[[0,0]]}"#,
            r#"{"dim":3,"kind":"simplex","scale":0.1}"#,
            r#"{"dim":2,"kind":"ellipse","a":2,"b":0.3,"angle":0.7}"#,
            r#"{"dim":3,"kind":"ball_poly","k":100,"radius":0.1}"#,
        ] {
            let once = canonical_body(text);
            assert_eq!(canonical_body(&once), once);
            BodySpec::parse(&once).unwrap().build().unwrap();
        }
    }

    #[test]
    fn unit_square_and_point() {
        let sq = BodySpec::parse(r#"{"dim":2,"kind":"box","sides":[1,1]}"#).unwrap().build().unwrap();
        assert_eq!(sq.polytope().unwrap().volume().unwrap(), 1.0);
        let pt = BodySpec::parse(r#"{"dim":2,"kind":"vertices","points":[[0,0]]}"#).unwrap().build().unwrap();
        assert_eq!(pt.polytope().unwrap().affine_dim(), 0);
    }

    #[test]
    fn parse_errors_carry_paths() {
        let err = BodySpec::parse(r#"{"dim":2,"kind":"vertices","points":[[0,0],[1]]}"#).unwrap_err();
        assert!(matches!(err, CliError::Parse { ref path, .. } if path == "$.points[1]"), "{err}");
        let err =
            FuncSpec::parse(r#"{"kind":"indicator","dim":3,"body":{"dim":2,"kind":"box","sides":[1,1]}}"#).unwrap_err();
        assert!(matches!(err, CliError::Parse { ref path, .. } if path == "$.dim"), "{err}");
        let err = BodySpec::parse(r#"{"dim":2,"kind":"torus"}"#).unwrap_err();
        assert!(matches!(err, CliError::Parse { ref path, .. } if path == "$.kind"), "{err}");
    }

    #[test]
    fn functions_round_trip() {
        for text in [
            r#"{"kind":"indicator","body":{"dim":2,"kind":"box","sides":[1,2]}}"#,
            r#"{"kind":"linear_indicator","y":[1,0],"body":{"dim":2,"kind":"box","sides":[1,2]}}"#,
            r#"{"kind":"max_affine","dim":1,"pieces":[{"slope":[1],"offset":0},{"slope":[-1],"offset":0}]}"#,
            r#"{"kind":"cells","dim":1,"cells":[{"points":[[0],[1]],"slope":[0.5],"offset":0.1}]}"#,
            r#"{"kind":"radial_quadratic","dim":2,"c":1}"#,
        ] {
            let once = to_string(&FuncSpec::parse(text).unwrap().to_value());
            assert_eq!(to_string(&FuncSpec::parse(&once).unwrap().to_value()), once);
            FuncSpec::parse(&once).unwrap().build().unwrap();
        }
    }

    #[test]
    fn primal_max_affine_must_be_coercive() {
        let text = r#"{"kind":"max_affine","dim":2,"pieces":[{"slope":[1,0],"offset":0},{"slope":[0,1],"offset":0}]}"#;
        let err = FuncSpec::parse(text).unwrap().build().unwrap_err();
        assert!(matches!(err, CliError::Core(vallab_core::Error::NotCoercive { .. })), "{err}");
        let detail = err.detail().unwrap();
        assert!(detail["direction"].is_array());
    }
}
