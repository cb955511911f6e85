#include "conebook/cone_field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numeric>
#include <sstream>

#include "conebook/errors.hpp"

namespace conebook {

double smoothstep(double x) {
    x = std::clamp(x, 0.0, 1.0);
    return x * x * (3.0 - 2.0 * x);
}

void perp_frame(const SpherePoint& p, const Vec4& axis, Vec4* e1, Vec4* e2) {
    const Vec4 base = p.ambient();
    Vec4 out[2];
    int found = 0;
    for (int i = 0; i < 4 && found < 2; ++i) {
        Vec4 cand = Vec4::Zero();
        cand[i] = 1.0;
        cand -= cand.dot(base) * base;
        cand -= cand.dot(axis) * axis;
        if (found == 1) cand -= cand.dot(out[0]) * out[0];
        const double n = cand.norm();
        if (n > 1e-6) {
            out[found] = cand / n;
            ++found;
        }
    }
    *e1 = out[0];
    *e2 = out[1];
}

namespace {

// --- minimal enclosing ball (Welzl) in the 3-d tangent space ---------------

struct Ball {
    Vec3 center = Vec3::Zero();
    double r2 = -1.0;

    bool contains(const Vec3& p, double eps) const {
        return r2 >= 0.0 && (p - center).squaredNorm() <= r2 + eps;
    }
};

Ball ball_from(const Vec3& a) { return Ball{a, 0.0}; }

Ball ball_from(const Vec3& a, const Vec3& b) {
    const Vec3 c = 0.5 * (a + b);
    return Ball{c, (a - c).squaredNorm()};
}

Ball ball_from(const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a;
    const Vec3 ac = c - a;
    const Vec3 n = ab.cross(ac);
    const double n2 = n.squaredNorm();
    if (n2 < 1e-24) {
        // Degenerate triangle: fall back to the widest pair.
        Ball best = ball_from(a, b);
        Ball bc = ball_from(b, c);
        Ball axc = ball_from(a, c);
        if (bc.r2 > best.r2) best = bc;
        if (axc.r2 > best.r2) best = axc;
        return best;
    }
    const Vec3 center =
        a + (ab.squaredNorm() * ac - ac.squaredNorm() * ab).cross(n) / (2.0 * n2);
    return Ball{center, (a - center).squaredNorm()};
}

Ball ball_from(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    Eigen::Matrix3d m;
    m.row(0) = (b - a).transpose();
    m.row(1) = (c - a).transpose();
    m.row(2) = (d - a).transpose();
    Vec3 rhs(0.5 * (b.squaredNorm() - a.squaredNorm()),
             0.5 * (c.squaredNorm() - a.squaredNorm()),
             0.5 * (d.squaredNorm() - a.squaredNorm()));
    if (std::abs(m.determinant()) < 1e-18) {
        Ball best = ball_from(a, b, c);
        Ball b2 = ball_from(a, b, d);
        Ball b3 = ball_from(a, c, d);
        Ball b4 = ball_from(b, c, d);
        if (b2.r2 > best.r2) best = b2;
        if (b3.r2 > best.r2) best = b3;
        if (b4.r2 > best.r2) best = b4;
        return best;
    }
    const Vec3 center = m.fullPivLu().solve(rhs);
    return Ball{center, (a - center).squaredNorm()};
}

Ball ball_of_supports(const std::vector<Vec3>& s) {
    switch (s.size()) {
        case 0: return Ball{};
        case 1: return ball_from(s[0]);
        case 2: return ball_from(s[0], s[1]);
        case 3: return ball_from(s[0], s[1], s[2]);
        default: return ball_from(s[0], s[1], s[2], s[3]);
    }
}

Ball welzl(std::vector<Vec3>& pts, std::size_t n, std::vector<Vec3>& supports) {
    constexpr double kEps = 1e-12;
    if (n == 0 || supports.size() == 4) return ball_of_supports(supports);
    Ball ball = welzl(pts, n - 1, supports);
    if (ball.contains(pts[n - 1], kEps)) return ball;
    supports.push_back(pts[n - 1]);
    ball = welzl(pts, n - 1, supports);
    supports.pop_back();
    // Move-to-front keeps the expected recursion depth small.
    const Vec3 moved = pts[n - 1];
    for (std::size_t i = n - 1; i > 0; --i) pts[i] = pts[i - 1];
    pts[0] = moved;
    return ball;
}

Ball minimal_enclosing_ball(std::vector<Vec3> pts) {
    // Sort first, then shuffle with a fixed stream: the result is unique, so
    // this only makes the arithmetic path independent of the input order.
    std::sort(pts.begin(), pts.end(), [](const Vec3& a, const Vec3& b) {
        if (a[0] != b[0]) return a[0] < b[0];
        if (a[1] != b[1]) return a[1] < b[1];
        return a[2] < b[2];
    });
    RngStream rng(0x9d2c5680u, pts.size());
    for (std::size_t i = pts.size(); i > 1; --i) {
        std::swap(pts[i - 1], pts[rng.next_u64() % i]);
    }
    std::vector<Vec3> supports;
    return welzl(pts, pts.size(), supports);
}

std::vector<Vec4> ring_dirs(const SpherePoint& p, const Vec4& axis, double half, int ring) {
    std::vector<Vec4> dirs;
    if (half < 1e-15) {
        dirs.push_back(axis);
        return dirs;
    }
    Vec4 e1, e2;
    perp_frame(p, axis, &e1, &e2);
    dirs.reserve(ring + 1);
    dirs.push_back(axis);
    const double c = std::cos(half), s = std::sin(half);
    for (int k = 0; k < ring; ++k) {
        const double a = kTwoPi * k / ring;
        dirs.push_back(c * axis + s * (std::cos(a) * e1 + std::sin(a) * e2));
    }
    return dirs;
}

// Unit vector along the tangential part of the dtheta dual, i.e. the
// direction in which theta grows fastest orthogonally to the Reeb field.
// Returns false if the dual coincides with the Reeb direction (|z1| = 0).
bool dtheta_perp(const SpherePoint& p, Vec4* out) {
    const double n2 = std::norm(p.z2);
    if (n2 <= 1e-24) return false;
    Vec4 dual(0.0, 0.0, -p.z2.imag() / n2, p.z2.real() / n2);
    const Vec4 r = reeb_field(p).v;
    Vec4 q = dual - dual.dot(r) * r;
    const double n = q.norm();
    if (n < 1e-9) return false;
    *out = q / n;
    return true;
}

}  // namespace

Cone smallest_enclosing_cone(const SpherePoint& base, const std::vector<Vec4>& dirs) {
    if (dirs.empty()) throw NoEnclosingConeError("smallest_enclosing_cone: empty direction set");
    const Eigen::Matrix<double, 4, 3> basis = tangent_basis(base);
    std::vector<Vec3> pts;
    pts.reserve(dirs.size());
    for (const Vec4& d : dirs) {
        const double n = d.norm();
        if (n < 1e-14) throw ZeroVectorError("smallest_enclosing_cone: zero direction");
        Vec3 u = basis.transpose() * (d / n);
        const double un = u.norm();
        if (un < 1e-10) throw ZeroVectorError("smallest_enclosing_cone: direction not tangent");
        pts.push_back(u / un);
    }
    if (pts.size() == 1) {
        return Cone{TangentVector{base, basis * pts[0]}, 0.0};
    }
    const Ball ball = minimal_enclosing_ball(pts);
    const double cn = ball.center.norm();
    if (cn < 1e-9) {
        throw NoEnclosingConeError("smallest_enclosing_cone: directions span a half-space");
    }
    const Vec3 axis3 = ball.center / cn;
    double min_dot = 1.0;
    for (const Vec3& u : pts) min_dot = std::min(min_dot, axis3.dot(u));
    const double half = std::acos(std::clamp(min_dot, -1.0, 1.0));
    if (half >= kPi / 2.0 - 1e-9) {
        throw NoEnclosingConeError("smallest_enclosing_cone: minimal cap angle >= pi/2");
    }
    return Cone{TangentVector{base, basis * axis3}, half};
}

bool is_interior(const Vec4& v, const Cone& c, double tol) {
    if (v.norm() < 1e-14) throw ZeroVectorError("is_interior: zero vector");
    return vector_angle(v, c.axis.v) < c.half_angle - tol;
}

double inner_angle(const ConeField& field, const SpherePoint& p) {
    return 2.0 * field.enclosing(p).half_angle;
}

AdaptednessReport check_adapted(const ConeField& field, const OneForm& alpha, int samples,
                                double tol, std::uint64_t seed) {
    AdaptednessReport report;
    report.dtheta_positive.worst = 1e300;
    report.alpha_positive.worst = 1e300;
    report.reeb_interior.worst = 1e300;

    RngStream rng(seed, 0xada9);

    // (1) binding tangency: every generator tangent to B = {z2 = 0}.
    for (int i = 0; i < samples; ++i) {
        const double psi = rng.uniform(0.0, kTwoPi);
        const SpherePoint p{Complex(std::cos(psi), std::sin(psi)), Complex(0.0, 0.0)};
        const Vec4 btan(-p.z1.imag(), p.z1.real(), 0.0, 0.0);
        for (const Vec4& g : field.generators(p)) {
            const double n = g.norm();
            if (n < 1e-14) continue;
            const Vec4 v = g / n;
            const double defect = (v - v.dot(btan) * btan).norm();
            if (defect > report.binding_tangency.worst) {
                report.binding_tangency.worst = defect;
                report.binding_tangency.witness = p;
            }
        }
    }
    report.binding_tangency.pass = report.binding_tangency.worst <= tol;

    // (2)-(4) at off-binding samples.
    for (int i = 0; i < samples; ++i) {
        SpherePoint p = sample_s3(rng);
        while (std::abs(p.z2) <= 1e-6) p = sample_s3(rng);
        for (const Vec4& g : field.generators(p)) {
            const double n = g.norm();
            if (n < 1e-14) continue;
            const Vec4 v = g / n;
            const double dt = dtheta(p, v);
            if (dt < report.dtheta_positive.worst) {
                report.dtheta_positive.worst = dt;
                report.dtheta_positive.witness = p;
            }
            const double av = alpha(p, v);
            if (av < report.alpha_positive.worst) {
                report.alpha_positive.worst = av;
                report.alpha_positive.witness = p;
            }
        }
        const Cone c = field.enclosing(p);
        const double margin = (c.half_angle - tol) - vector_angle(reeb_field(p).v, c.axis.v);
        if (margin < report.reeb_interior.worst) {
            report.reeb_interior.worst = margin;
            report.reeb_interior.witness = p;
        }
    }
    report.dtheta_positive.pass = report.dtheta_positive.worst > 0.0;
    report.alpha_positive.pass = report.alpha_positive.worst > 0.0;
    report.reeb_interior.pass = report.reeb_interior.worst > 0.0;
    return report;
}

// --- built-in fields --------------------------------------------------------

ConeField hopf_ray_field() {
    return ConeField(
        "hopf",
        [](const SpherePoint& p) { return std::vector<Vec4>{reeb_field(p).v}; },
        [](const SpherePoint& p) { return Cone{reeb_field(p), 0.0}; });
}

ConeField constant_cone_field(double inner_angle0, int ring) {
    const double half = inner_angle0 / 2.0;
    return ConeField(
        "constant",
        [half, ring](const SpherePoint& p) {
            return ring_dirs(p, reeb_field(p).v, half, ring);
        },
        [half](const SpherePoint& p) { return Cone{reeb_field(p), half}; });
}

namespace {

double collared_half_angle(const SpherePoint& p, double inner_angle0, double collar_eps) {
    const double a2 = std::abs(p.z2);
    const double a1 = std::abs(p.z1);
    const double profile = 0.5 * inner_angle0 * smoothstep(a2 / collar_eps);
    const double dtheta_clamp = 0.9 * std::atan2(a2, a1);
    return std::min(profile, dtheta_clamp);
}

}  // namespace

ConeField collared_cone_field(double inner_angle0, double collar_eps, int ring) {
    return ConeField(
        "collared",
        [inner_angle0, collar_eps, ring](const SpherePoint& p) {
            return ring_dirs(p, reeb_field(p).v,
                             collared_half_angle(p, inner_angle0, collar_eps), ring);
        },
        [inner_angle0, collar_eps](const SpherePoint& p) {
            return Cone{reeb_field(p), collared_half_angle(p, inner_angle0, collar_eps)};
        });
}

ConeField dtheta_fan_field(double span, int count) {
    return ConeField("dtheta_fan", [span, count](const SpherePoint& p) {
        const Vec4 r = reeb_field(p).v;
        Vec4 q;
        if (!dtheta_perp(p, &q)) return std::vector<Vec4>{r};
        std::vector<Vec4> dirs;
        dirs.reserve(count);
        for (int i = 0; i < count; ++i) {
            const double s = span * i / (count - 1);
            dirs.push_back(std::cos(s) * r + std::sin(s) * q);
        }
        return dirs;
    });
}

ConeField planar_fan_field(double beta, int count) {
    return ConeField("planar_fan", [beta, count](const SpherePoint& p) {
        const Eigen::Matrix<double, 4, 3> basis = tangent_basis(p);
        const Vec4 r = basis.col(0);
        const Vec4 e = basis.col(1);
        std::vector<Vec4> dirs;
        dirs.reserve(count);
        for (int i = 0; i < count; ++i) {
            const double s = -beta + 2.0 * beta * i / (count - 1);
            dirs.push_back(std::cos(s) * r + std::sin(s) * e);
        }
        return dirs;
    });
}

ConeField violation_binding_field(double inner_angle0, double collar_eps) {
    ConeField base = collared_cone_field(inner_angle0, collar_eps);
    return ConeField("violation_binding", [base](const SpherePoint& p) {
        std::vector<Vec4> dirs = base.generators(p);
        if (p.on_binding(1e-9)) dirs.push_back(Vec4(0.0, 0.0, 1.0, 0.0));
        return dirs;
    });
}

ConeField violation_dtheta_field(double inner_angle0, double collar_eps) {
    ConeField base = collared_cone_field(inner_angle0, collar_eps);
    return ConeField("violation_dtheta", [base](const SpherePoint& p) {
        std::vector<Vec4> dirs = base.generators(p);
        Vec4 q;
        if (!p.on_binding(1e-9) && dtheta_perp(p, &q)) {
            const Vec4 r = reeb_field(p).v;
            // 60 degrees away from Reeb against the dtheta gradient: alpha
            // stays positive but dtheta goes negative wherever |z1| > 1/2.
            const double g = kPi / 3.0;
            dirs.push_back(std::cos(g) * r - std::sin(g) * q);
        }
        return dirs;
    });
}

ConeField cone_field_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cone_field_from_csv: cannot open " + path);
    struct Row {
        Vec4 point;
        Vec4 axis;
        double half;
    };
    auto rows = std::make_shared<std::vector<Row>>();
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        Row row;
        char comma;
        double vals[9];
        bool ok = true;
        for (int i = 0; i < 9; ++i) {
            if (!(ss >> vals[i])) {
                ok = false;
                break;
            }
            if (i < 8) ss >> comma;
        }
        if (!ok) {
            // Skip a header row; anything else malformed is an error.
            if (rows->empty()) continue;
            throw ConfigError("cone_field_from_csv: malformed row: " + line);
        }
        row.point = Vec4(vals[0], vals[1], vals[2], vals[3]);
        row.axis = Vec4(vals[4], vals[5], vals[6], vals[7]);
        row.half = vals[8];
        rows->push_back(row);
    }
    if (rows->empty()) throw ConfigError("cone_field_from_csv: no data rows in " + path);

    auto interpolate = [rows](const SpherePoint& p) {
        const Vec4 x = p.ambient();
        // Inverse-distance weights over the 4 nearest tabulated samples.
        std::vector<std::pair<double, std::size_t>> dist;
        dist.reserve(rows->size());
        for (std::size_t i = 0; i < rows->size(); ++i) {
            dist.emplace_back(((*rows)[i].point - x).norm(), i);
        }
        const std::size_t k = std::min<std::size_t>(4, dist.size());
        std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
        Vec4 axis = Vec4::Zero();
        double half = 0.0, wsum = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double w = 1.0 / (dist[j].first + 1e-12);
            axis += w * (*rows)[dist[j].second].axis;
            half += w * (*rows)[dist[j].second].half;
            wsum += w;
        }
        axis /= wsum;
        half /= wsum;
        axis -= axis.dot(x) * x;  // re-project to the tangent space
        const double n = axis.norm();
        if (n < 1e-12) throw FieldDegenerateError("tabulated cone axis vanishes at sample");
        return Cone{TangentVector{p, axis / n}, half};
    };

    return ConeField(
        "csv",
        [interpolate](const SpherePoint& p) {
            const Cone c = interpolate(p);
            return ring_dirs(p, c.axis.v, c.half_angle, 12);
        },
        [interpolate](const SpherePoint& p) { return interpolate(p); });
}

}  // namespace conebook
