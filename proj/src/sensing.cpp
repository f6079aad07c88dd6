#include "oisac/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oisac/channel.hpp"
#include "oisac/config.hpp"
#include "link_util.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace oisac {

namespace {

// ---- small dense linear algebra for the 2M x 3 projection system ----

// Least squares min ||A x - b|| via Householder QR; A is n x 3 row-major,
// overwritten. Returns false on a rank-deficient R.
bool qr_solve3(double* a, double* b, int n, double x[3]) {
    for (int k = 0; k < 3; ++k) {
        double norm = 0.0;
        for (int i = k; i < n; ++i) norm += a[i * 3 + k] * a[i * 3 + k];
        norm = std::sqrt(norm);
        if (norm == 0.0) return false;
        if (a[k * 3 + k] > 0.0) norm = -norm;
        for (int i = k; i < n; ++i) a[i * 3 + k] /= norm;
        a[k * 3 + k] -= 1.0;
        for (int j = k + 1; j < 3; ++j) {
            double s = 0.0;
            for (int i = k; i < n; ++i) s += a[i * 3 + k] * a[i * 3 + j];
            s /= a[k * 3 + k];
            for (int i = k; i < n; ++i) a[i * 3 + j] += s * a[i * 3 + k];
        }
        double s = 0.0;
        for (int i = k; i < n; ++i) s += a[i * 3 + k] * b[i];
        s /= a[k * 3 + k];
        for (int i = k; i < n; ++i) b[i] += s * a[i * 3 + k];
        a[k * 3 + k] = norm;  // R diagonal
    }
    for (int k = 2; k >= 0; --k) {
        double s = b[k];
        for (int j = k + 1; j < 3; ++j) s -= a[k * 3 + j] * x[j];
        if (a[k * 3 + k] == 0.0) return false;
        x[k] = s / a[k * 3 + k];
    }
    return true;
}

// Eigenvalues of a symmetric 3x3 matrix, ascending (trigonometric method).
std::array<double, 3> sym3_eigenvalues(const double s[3][3]) {
    const double p1 = s[0][1] * s[0][1] + s[0][2] * s[0][2] + s[1][2] * s[1][2];
    const double tr = s[0][0] + s[1][1] + s[2][2];
    if (p1 == 0.0) {
        std::array<double, 3> e{s[0][0], s[1][1], s[2][2]};
        std::sort(e.begin(), e.end());
        return e;
    }
    const double q = tr / 3.0;
    const double p2 = (s[0][0] - q) * (s[0][0] - q) + (s[1][1] - q) * (s[1][1] - q) +
                      (s[2][2] - q) * (s[2][2] - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    double bmat[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) bmat[i][j] = (s[i][j] - (i == j ? q : 0.0)) / p;
    const double detb =
        bmat[0][0] * (bmat[1][1] * bmat[2][2] - bmat[1][2] * bmat[2][1]) -
        bmat[0][1] * (bmat[1][0] * bmat[2][2] - bmat[1][2] * bmat[2][0]) +
        bmat[0][2] * (bmat[1][0] * bmat[2][1] - bmat[1][1] * bmat[2][0]);
    const double r = std::clamp(detb / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    const double e2 = tr - e1 - e3;
    std::array<double, 3> e{e1, e2, e3};
    std::sort(e.begin(), e.end());
    return e;
}

struct Scene {
    std::vector<Vec3> mounts;
    std::vector<std::array<double, 2>> offsets;
    int count = 0;
};

Scene make_scene(const CameraArray& cam) {
    cam.validate();
    return {cam.mounts(), cam.offsets(), cam.count()};
}

struct TrialWorkspace {
    std::vector<PixelObservation> obs;
    std::vector<double> qr_a;
    std::vector<double> qr_b;
};

// One sensing frame: attitude + fading draws, reflected intensities,
// noisy projections, least-squares localization. Returns false on a
// blocked link or an ill-conditioned system.
bool sensing_trial(const SystemConfig& cfg, const Scene& sc, Rng& rng, TrialWorkspace& ws,
                   double& err2) {
    const Attitude att = sample_attitude(cfg.attitude, rng);
    const RotMat q = rotation_matrix(att);

    const double g_as = deterministic_gain(cfg.chan_ap_target, q, cfg.ap_position,
                                           cfg.target_position, LinkRole::downlink);
    if (g_as <= 0.0) return false;
    const double h_as = g_as * sample_turbulence(cfg.turbulence, rng);

    const Vec3 t1 = cfg.ap_position + q.apply(sc.mounts[0]);  // camera 1 pose
    const Vec3 p_c1 = world_to_camera(q, t1, cfg.target_position);

    ws.obs.clear();
    for (int i = 0; i < sc.count; ++i) {
        const Vec3 cam_world = cfg.ap_position + q.apply(sc.mounts[i]);
        const double g_sa = deterministic_gain(cfg.chan_target_camera, q, cfg.target_position,
                                               cam_world, LinkRole::reflection);
        if (g_sa <= 0.0) return false;
        const double h_sa = g_sa * sample_turbulence(cfg.turbulence, rng);
        const double i_ref = cfg.target_reflectivity * h_sa * h_as * cfg.eh.p_dl / cfg.camera.cam_area;
        const double var = pixel_noise_variance(cfg.camera, cfg.eh.alpha, i_ref);
        const double sd = std::sqrt(var);
        const auto proj = project(cfg.camera, i, p_c1);
        ws.obs.push_back({i, proj[0] + sd * rng.next_normal(), proj[1] + sd * rng.next_normal(),
                          var, var});
    }

    LocalizationResult loc;
    if (cfg.estimator_attitude == EstimatorAttitude::per_trial) {
        loc = localize(cfg.camera, ws.obs, q, t1);
    } else {
        // uninstrumented ship: the estimator only knows the mean attitude
        const RotMat qbar = rotation_matrix(
            {cfg.attitude.mean_roll, cfg.attitude.mean_pitch, cfg.attitude.mean_yaw});
        loc = localize(cfg.camera, ws.obs, qbar, cfg.ap_position + qbar.apply(sc.mounts[0]));
    }
    if (!loc.condition_ok) return false;
    const Vec3 e = loc.p_world - cfg.target_position;
    err2 = e.dot(e);
    return true;
}

}  // namespace

std::vector<Vec3> CameraArray::mounts() const {
    std::vector<Vec3> g;
    g.reserve(static_cast<size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            g.push_back({(c - (cols - 1) / 2.0) * spacing_x, (r - (rows - 1) / 2.0) * spacing_y, 0.0});
    // camera 1 = grid point nearest the origin, earliest index on ties
    size_t lead = 0;
    double best = g[0].dot(g[0]);
    for (size_t i = 1; i < g.size(); ++i) {
        const double d = g[i].dot(g[i]);
        if (d < best - 1e-12) {
            best = d;
            lead = i;
        }
    }
    std::swap(g[0], g[lead]);
    return g;
}

std::vector<std::array<double, 2>> CameraArray::offsets() const {
    const auto g = mounts();
    std::vector<std::array<double, 2>> off(g.size());
    for (size_t i = 0; i < g.size(); ++i) off[i] = {g[0].x - g[i].x, g[0].y - g[i].y};
    return off;
}

void CameraArray::validate() const {
    if (rows < 1 || cols < 1 || count() < 2)
        throw std::invalid_argument("CameraArray: need at least 2 cameras");
    if (!(focal_x > 0.0 && focal_y > 0.0)) throw std::invalid_argument("CameraArray: focal <= 0");
    if (!(spacing_x > 0.0 && spacing_y > 0.0))
        throw std::invalid_argument("CameraArray: spacing <= 0");
    if (!(cam_area > 0.0)) throw std::invalid_argument("CameraArray: cam_area <= 0");
    if (!(eta > 0.0)) throw std::invalid_argument("CameraArray: eta <= 0");
    if (pixel_noise_base < 0.0) throw std::invalid_argument("CameraArray: pixel_noise_base < 0");
}

Vec3 world_to_camera(const RotMat& q, const Vec3& t, const Vec3& p_world) {
    return q.apply_transpose(p_world - t);
}

Vec3 camera_to_world(const RotMat& q, const Vec3& t, const Vec3& p_c) {
    return q.apply(p_c) + t;
}

std::array<double, 2> project(const CameraArray& cam, int m, const Vec3& p_c1) {
    if (p_c1.z == 0.0) throw std::domain_error("project: target in the camera plane (z_c1 = 0)");
    const auto off = cam.offsets();
    return {cam.focal_x * (p_c1.x + off[m][0]) / p_c1.z,
            cam.focal_y * (p_c1.y + off[m][1]) / p_c1.z};
}

double pixel_noise_variance(const CameraArray& cam, double alpha, double i_ref) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("pixel_noise_variance: alpha");
    if (!(i_ref > 0.0)) throw std::domain_error("pixel_noise_variance: blocked link (I_ref <= 0)");
    return cam.eta * cam.pixel_noise_base / (alpha * i_ref);
}

LocalizationResult localize(const CameraArray& cam, std::span<const PixelObservation> obs,
                            const RotMat& q, const Vec3& t, double cond_threshold) {
    if (obs.size() < 2) throw std::invalid_argument("localize: need >= 2 observations");
    const auto off = cam.offsets();
    const int n = 2 * static_cast<int>(obs.size());
    std::vector<double> a(static_cast<size_t>(n) * 3);
    std::vector<double> b(n);

    for (size_t k = 0; k < obs.size(); ++k) {
        const auto& o = obs[k];
        a[(2 * k) * 3 + 0] = cam.focal_x;
        a[(2 * k) * 3 + 1] = 0.0;
        a[(2 * k) * 3 + 2] = -o.x;
        a[(2 * k + 1) * 3 + 0] = 0.0;
        a[(2 * k + 1) * 3 + 1] = cam.focal_y;
        a[(2 * k + 1) * 3 + 2] = -o.y;
        b[2 * k] = -cam.focal_x * off[o.cam_index][0];
        b[2 * k + 1] = -cam.focal_y * off[o.cam_index][1];
    }

    // condition check on Sigma^T Sigma before the factorization destroys A
    double s[3][3] = {};
    for (int i = 0; i < n; ++i)
        for (int r = 0; r < 3; ++r)
            for (int c = r; c < 3; ++c) s[r][c] += a[i * 3 + r] * a[i * 3 + c];
    s[1][0] = s[0][1];
    s[2][0] = s[0][2];
    s[2][1] = s[1][2];
    const auto eig = sym3_eigenvalues(s);

    LocalizationResult res;
    res.condition_ok = eig[0] > 0.0 && eig[2] / eig[0] <= cond_threshold;

    double x[3] = {};
    if (!qr_solve3(a.data(), b.data(), n, x)) res.condition_ok = false;
    res.p_c1 = {x[0], x[1], x[2]};
    res.p_world = camera_to_world(q, t, res.p_c1);
    return res;
}

MseEstimate monte_carlo_mse(const SystemConfig& cfg, long trials, std::uint64_t stream_domain,
                            Exec exec) {
    if (trials < 1) throw std::invalid_argument("monte_carlo_mse: trials < 1");
    cfg.validate();
    const Scene sc = make_scene(cfg.camera);

    std::vector<double> err2(trials, 0.0);
    std::vector<unsigned char> ok(trials, 0);

    // degenerate per-trial geometry (target in the camera plane, blocked
    // links) counts as a failed trial; exceptions must not cross the
    // parallel region
    auto run_trial = [&](long t, TrialWorkspace& ws) {
        Rng rng = Rng::substream(cfg.seed, stream_domain, static_cast<std::uint64_t>(t));
        try {
            ok[t] = sensing_trial(cfg, sc, rng, ws, err2[t]) ? 1 : 0;
        } catch (const std::exception&) {
            ok[t] = 0;
        }
    };

    if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel
        {
            TrialWorkspace ws;
#pragma omp for schedule(static)
            for (long t = 0; t < trials; ++t) run_trial(t, ws);
        }
#else
        exec = Exec::serial;
#endif
    }
    if (exec == Exec::serial) {
        TrialWorkspace ws;
        for (long t = 0; t < trials; ++t) run_trial(t, ws);
    }

    // ordered reduction: identical result for any worker count
    long n_ok = 0;
    double sum = 0.0, sumsq = 0.0;
    for (long t = 0; t < trials; ++t) {
        if (!ok[t]) continue;
        ++n_ok;
        sum += err2[t];
        sumsq += err2[t] * err2[t];
    }
    if (n_ok == 0) throw std::runtime_error("monte_carlo_mse: estimation impossible, all trials failed");

    MseEstimate est;
    est.trials = trials;
    est.mse = sum / n_ok;
    est.failure_rate = static_cast<double>(trials - n_ok) / trials;
    if (n_ok > 1) {
        const double var = std::max(0.0, sumsq / n_ok - est.mse * est.mse);
        est.std_error = std::sqrt(var / n_ok);
    }
    return est;
}

double delta1_expected(const CameraArray& cam, const Vec3& p_c1, std::span<const double> noise_vars) {
    const auto off = cam.offsets();
    const int m = cam.count();
    if (!noise_vars.empty() && static_cast<int>(noise_vars.size()) != m)
        throw std::invalid_argument("delta1_expected: need one noise variance per camera");
    if (p_c1.z == 0.0) throw std::domain_error("delta1_expected: z_c1 = 0");

    std::vector<double> ab(m), bb(m);
    for (int i = 0; i < m; ++i) {
        ab[i] = cam.focal_x * (p_c1.x + off[i][0]) / p_c1.z;
        bb[i] = cam.focal_y * (p_c1.y + off[i][1]) / p_c1.z;
    }
    double diag = 0.0;
    for (int i = 0; i < m; ++i) {
        diag += ab[i] * ab[i] + bb[i] * bb[i];
        if (!noise_vars.empty()) diag += 2.0 * noise_vars[i];
    }
    double cross = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) cross += ab[i] * ab[j] + bb[i] * bb[j];
    const double fx2 = cam.focal_x * cam.focal_x, fy2 = cam.focal_y * cam.focal_y;
    return m * fx2 * fy2 * ((m - 1) * diag - 2.0 * cross);
}

double analytic_mse(const SystemConfig& cfg) {
    cfg.validate();
    if (cfg.attitude.mean_roll != 0.0 || cfg.attitude.mean_pitch != 0.0)
        throw std::domain_error("analytic_mse: linearization assumes zero mean roll/pitch");

    const CameraArray& cam = cfg.camera;
    const int m = cam.count();
    const auto mounts = cam.mounts();
    const auto off = cam.offsets();
    const RotMat qbar =
        rotation_matrix({0.0, 0.0, cfg.attitude.mean_yaw});

    // downlink illumination moments
    const auto down = detail::link_stats(cfg.ap_position, cfg.target_position, cfg.attitude);
    const double mu_c = down.mean_cos;
    if (mu_c <= 0.0) throw std::domain_error("analytic_mse: mean boresight away from target");
    const double k2 = detail::downlink_gain_scale(cfg.chan_ap_target, down);
    if (k2 <= 0.0) throw std::domain_error("analytic_mse: downlink blocked at mean attitude");
    const double m1d = cfg.chan_ap_target.lambertian_order();
    const double e_inv_gas =
        (std::pow(mu_c, -m1d) +
         0.5 * m1d * (m1d + 1.0) * std::pow(mu_c, -m1d - 2.0) * down.sigma_c2) /
        k2;

    const double rec = reciprocal_turbulence_moment(cfg.turbulence);
    const double k1 = cam.eta * cam.pixel_noise_base * cam.cam_area /
                      (cfg.eh.alpha * cfg.target_reflectivity * cfg.eh.p_dl);

    // per-camera reflected-path moments; the two fading draws on the
    // chain contribute the reciprocal moment twice
    std::vector<double> esig2(m);
    for (int i = 0; i < m; ++i) {
        const Vec3 cam_world = cfg.ap_position + qbar.apply(mounts[i]);
        const auto li = detail::link_stats(cam_world, cfg.target_position, cfg.attitude);
        if (li.mean_cos <= 0.0)
            throw std::domain_error("analytic_mse: camera link blocked at mean attitude");
        if (li.mean_cos < std::cos(cfg.chan_target_camera.fov))
            throw std::domain_error("analytic_mse: camera outside FoV at mean attitude");
        const double k3i = detail::uplink_gain_scale(cfg.chan_target_camera, li, li.mean_cos);
        const double e_inv_gsa =
            (1.0 / li.mean_cos + li.sigma_c2 / (li.mean_cos * li.mean_cos * li.mean_cos)) / k3i;
        esig2[i] = k1 * rec * rec * e_inv_gas * e_inv_gsa;
    }

    // mean-geometry projections
    const Vec3 p_c1 = qbar.apply_transpose(cfg.target_position - cfg.ap_position) - mounts[0];
    const double z = p_c1.z;
    std::vector<double> ab(m), bb(m);
    for (int i = 0; i < m; ++i) {
        ab[i] = cam.focal_x * (p_c1.x + off[i][0]) / z;
        bb[i] = cam.focal_y * (p_c1.y + off[i][1]) / z;
    }

    const double big_a = m * cam.focal_x * cam.focal_x;
    const double big_b = m * cam.focal_y * cam.focal_y;
    double big_c = 0.0, big_d = 0.0, big_e = 0.0;
    for (int i = 0; i < m; ++i) {
        big_c += cam.focal_x * ab[i];
        big_d += cam.focal_y * bb[i];
        big_e += ab[i] * ab[i] + bb[i] * bb[i];
    }
    const double adj[3][3] = {
        {big_b * big_e - big_d * big_d, big_c * big_d, big_c * big_b},
        {big_c * big_d, big_a * big_e - big_c * big_c, big_a * big_d},
        {big_c * big_b, big_a * big_d, big_a * big_b}};

    const double ed1 = delta1_expected(cam, p_c1, esig2);

    // exact first-order noise propagation: delta p = z (S^T S)^-1 S^T e
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
        double colx[3], coly[3];
        for (int r = 0; r < 3; ++r) {
            colx[r] = adj[r][0] * cam.focal_x - adj[r][2] * ab[i];
            coly[r] = adj[r][1] * cam.focal_y - adj[r][2] * bb[i];
        }
        const double nx = colx[0] * colx[0] + colx[1] * colx[1] + colx[2] * colx[2];
        const double ny = coly[0] * coly[0] + coly[1] * coly[1] + coly[2] * coly[2];
        acc += esig2[i] * (nx + ny);
    }
    return z * z * acc / (ed1 * ed1);
}

}  // namespace oisac
