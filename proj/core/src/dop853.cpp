#include "minres/dop853.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace minres {

namespace {

constexpr double c2 = 0.526001519587677318785587544488e-01;
constexpr double c3 = 0.789002279381515978178381316732e-01;
constexpr double c4 = 0.118350341907227396726757197510e+00;
constexpr double c5 = 0.281649658092772603273242802490e+00;
constexpr double c6 = 0.333333333333333333333333333333e+00;
constexpr double c7 = 0.25e+00;
constexpr double c8 = 0.307692307692307692307692307692e+00;
constexpr double c9 = 0.651282051282051282051282051282e+00;
constexpr double c10 = 0.6e+00;
constexpr double c11 = 0.857142857142857142857142857142e+00;
constexpr double c14 = 0.1e+00;
constexpr double c15 = 0.2e+00;
constexpr double c16 = 0.777777777777777777777777777778e+00;

constexpr double a21 = 5.26001519587677318785587544488e-2;
constexpr double a31 = 1.97250569845378994544595329183e-2;
constexpr double a32 = 5.91751709536136983633785987549e-2;
constexpr double a41 = 2.95875854768068491816892993775e-2;
constexpr double a43 = 8.87627564304205475450678981324e-2;
constexpr double a51 = 2.41365134159266685502369798665e-1;
constexpr double a53 = -8.84549479328286085344864962717e-1;
constexpr double a54 = 9.24834003261792003115737966543e-1;
constexpr double a61 = 3.7037037037037037037037037037e-2;
constexpr double a64 = 1.70828608729473871279604482173e-1;
constexpr double a65 = 1.25467687566822425016691814123e-1;
constexpr double a71 = 3.7109375e-2;
constexpr double a74 = 1.70252211019544039314978060272e-1;
constexpr double a75 = 6.02165389804559606850219397283e-2;
constexpr double a76 = -1.7578125e-2;
constexpr double a81 = 3.70920001185047927108779319836e-2;
constexpr double a84 = 1.70383925712239993810214054705e-1;
constexpr double a85 = 1.07262030446373284651809199168e-1;
constexpr double a86 = -1.53194377486244017527936158236e-2;
constexpr double a87 = 8.27378916381402288758473766002e-3;
constexpr double a91 = 6.24110958716075717114429577812e-1;
constexpr double a94 = -3.36089262944694129406857109825e0;
constexpr double a95 = -8.68219346841726006818189891453e-1;
constexpr double a96 = 2.75920996994467083049415600797e1;
constexpr double a97 = 2.01540675504778934086186788979e1;
constexpr double a98 = -4.34898841810699588477366255144e1;
constexpr double a101 = 4.77662536438264365890433908527e-1;
constexpr double a104 = -2.48811461997166764192642586468e0;
constexpr double a105 = -5.90290826836842996371446475743e-1;
constexpr double a106 = 2.12300514481811942347288949897e1;
constexpr double a107 = 1.52792336328824235832596922938e1;
constexpr double a108 = -3.32882109689848629194453265587e1;
constexpr double a109 = -2.03312017085086261358222928593e-2;
constexpr double a111 = -9.3714243008598732571704021658e-1;
constexpr double a114 = 5.18637242884406370830023853209e0;
constexpr double a115 = 1.09143734899672957818500254654e0;
constexpr double a116 = -8.14978701074692612513997267357e0;
constexpr double a117 = -1.85200656599969598641566180701e1;
constexpr double a118 = 2.27394870993505042818970056734e1;
constexpr double a119 = 2.49360555267965238987089396762e0;
constexpr double a1110 = -3.0467644718982195003823669022e0;
constexpr double a121 = 2.27331014751653820792359768449e0;
constexpr double a124 = -1.05344954667372501984066689879e1;
constexpr double a125 = -2.00087205822486249909675718444e0;
constexpr double a126 = -1.79589318631187989172765950534e1;
constexpr double a127 = 2.79488845294199600508499808837e1;
constexpr double a128 = -2.85899827713502369474065508674e0;
constexpr double a129 = -8.87285693353062954433549289258e0;
constexpr double a1210 = 1.23605671757943030647266201528e1;
constexpr double a1211 = 6.43392746015763530355970484046e-1;

constexpr double a141 = 5.61675022830479523392909219681e-2;
constexpr double a147 = 2.53500210216624811088794765333e-1;
constexpr double a148 = -2.46239037470802489917441475441e-1;
constexpr double a149 = -1.24191423263816360469010140626e-1;
constexpr double a1410 = 1.5329179827876569731206322685e-1;
constexpr double a1411 = 8.20105229563468988491666602057e-3;
constexpr double a1412 = 7.56789766054569976138603589584e-3;
constexpr double a1413 = -8.298e-3;
constexpr double a151 = 3.18346481635021405060768473261e-2;
constexpr double a156 = 2.83009096723667755288322961402e-2;
constexpr double a157 = 5.35419883074385676223797384372e-2;
constexpr double a158 = -5.49237485713909884646569340306e-2;
constexpr double a1511 = -1.08347328697249322858509316994e-4;
constexpr double a1512 = 3.82571090835658412954920192323e-4;
constexpr double a1513 = -3.40465008687404560802977114492e-4;
constexpr double a1514 = 1.41312443674632500278074618366e-1;
constexpr double a161 = -4.28896301583791923408573538692e-1;
constexpr double a166 = -4.69762141536116384314449447206e0;
constexpr double a167 = 7.68342119606259904184240953878e0;
constexpr double a168 = 4.06898981839711007970213554331e0;
constexpr double a169 = 3.56727187455281109270669543021e-1;
constexpr double a1613 = -1.39902416515901462129418009734e-3;
constexpr double a1614 = 2.9475147891527723389556272149e0;
constexpr double a1615 = -9.15095847217987001081870187138e0;

constexpr double b1 = 5.42937341165687622380535766363e-2;
constexpr double b6 = 4.45031289275240888144113950566e0;
constexpr double b7 = 1.89151789931450038304281599044e0;
constexpr double b8 = -5.8012039600105847814672114227e0;
constexpr double b9 = 3.1116436695781989440891606237e-1;
constexpr double b10 = -1.52160949662516078556178806805e-1;
constexpr double b11 = 2.01365400804030348374776537501e-1;
constexpr double b12 = 4.47106157277725905176885569043e-2;

constexpr double bhh1 = 0.244094488188976377952755905512e+00;
constexpr double bhh2 = 0.733846688281611857341361741547e+00;
constexpr double bhh3 = 0.220588235294117647058823529412e-01;

constexpr double er1 = 0.1312004499419488073250102996e-01;
constexpr double er6 = -0.1225156446376204440720569753e+01;
constexpr double er7 = -0.4957589496572501915214079952e+00;
constexpr double er8 = 0.1664377182454986536961530415e+01;
constexpr double er9 = -0.3503288487499736816886487290e+00;
constexpr double er10 = 0.3341791187130174790297318841e+00;
constexpr double er11 = 0.8192320648511571246570742613e-01;
constexpr double er12 = -0.2235530786388629525884427845e-01;

constexpr double d41 = -0.84289382761090128651353491142e+01;
constexpr double d46 = 0.56671495351937776962531783590e+00;
constexpr double d47 = -0.30689499459498916912797304727e+01;
constexpr double d48 = 0.23846676565120698287728149680e+01;
constexpr double d49 = 0.21170345824450282767155149946e+01;
constexpr double d410 = -0.87139158377797299206789907490e+00;
constexpr double d411 = 0.22404374302607882758541771650e+01;
constexpr double d412 = 0.63157877876946881815570249290e+00;
constexpr double d413 = -0.88990336451333310820698117400e-01;
constexpr double d414 = 0.18148505520854727256656404962e+02;
constexpr double d415 = -0.91946323924783554000451984436e+01;
constexpr double d416 = -0.44360363875948939664310572000e+01;
constexpr double d51 = 0.10427508642579134603413151009e+02;
constexpr double d56 = 0.24228349177525818288430175319e+03;
constexpr double d57 = 0.16520045171727028198505394887e+03;
constexpr double d58 = -0.37454675472269020279518312152e+03;
constexpr double d59 = -0.22113666853125306036270938578e+02;
constexpr double d510 = 0.77334326684722638389603898808e+01;
constexpr double d511 = -0.30674084731089398182061213626e+02;
constexpr double d512 = -0.93321305264302278729567221706e+01;
constexpr double d513 = 0.15697238121770843886131091075e+02;
constexpr double d514 = -0.31139403219565177677282850411e+02;
constexpr double d515 = -0.93529243588444783865713862664e+01;
constexpr double d516 = 0.35816841486394083752465898540e+02;
constexpr double d61 = 0.19985053242002433820987653617e+02;
constexpr double d66 = -0.38703730874935176555105901742e+03;
constexpr double d67 = -0.18917813819516756882830838328e+03;
constexpr double d68 = 0.52780815920542364900561016686e+03;
constexpr double d69 = -0.11573902539959630126141871134e+02;
constexpr double d610 = 0.68812326946963000169666922661e+01;
constexpr double d611 = -0.10006050966910838403183860980e+01;
constexpr double d612 = 0.77771377980534432092869265740e+00;
constexpr double d613 = -0.27782057523535084065932004339e+01;
constexpr double d614 = -0.60196695231264120758267380846e+02;
constexpr double d615 = 0.84320405506677161018159903784e+02;
constexpr double d616 = 0.11992291136182789328035130030e+02;
constexpr double d71 = -0.25693933462703749003312586129e+02;
constexpr double d76 = -0.15418974869023643374053993627e+03;
constexpr double d77 = -0.23152937917604549567536039109e+03;
constexpr double d78 = 0.35763911791061412378285349910e+03;
constexpr double d79 = 0.93405324183624310003907691704e+02;
constexpr double d710 = -0.37458323136451633156875139351e+02;
constexpr double d711 = 0.10409964950896230045147246184e+03;
constexpr double d712 = 0.29840293426660503123344363579e+02;
constexpr double d713 = -0.43533456590011143754432175058e+02;
constexpr double d714 = 0.96324553959188282948394950600e+02;
constexpr double d715 = -0.39177261675615439165231486172e+02;
constexpr double d716 = -0.14972683625798562581422125276e+03;

State2 axpy(const State2& y, double h, std::initializer_list<std::pair<double, const State2*>> terms) {
    State2 out{};
    for (int i = 0; i < 2; ++i) {
        double s = 0.0;
        for (const auto& [c, k] : terms) s += c * (*k)[static_cast<std::size_t>(i)];
        out[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] + h * s;
    }
    return out;
}

bool finite(const State2& y) { return std::isfinite(y[0]) && std::isfinite(y[1]); }

}  // namespace

void RkSegment::eval(double t, int i, double& y, double& dy, double& ddy) const {
    const auto c = [&](int k) { return r[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]; };
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    // y(s) = r0 + s(r1 + s1(r2 + s(r3 + s1(r4 + s(r5 + s1(r6 + s r7))))))
    double a6 = c(6) + s * c(7), d6 = c(7), e6 = 0.0;
    double a5 = c(5) + s1 * a6, d5 = -a6 + s1 * d6, e5 = -2.0 * d6 + s1 * e6;
    double a4 = c(4) + s * a5, d4 = a5 + s * d5, e4 = 2.0 * d5 + s * e5;
    double a3 = c(3) + s1 * a4, d3 = -a4 + s1 * d4, e3 = -2.0 * d4 + s1 * e4;
    double a2 = c(2) + s * a3, d2 = a3 + s * d3, e2 = 2.0 * d3 + s * e3;
    double a1 = c(1) + s1 * a2, d1 = -a2 + s1 * d2, e1 = -2.0 * d2 + s1 * e2;
    y = c(0) + s * a1;
    dy = (a1 + s * d1) / h;
    ddy = (2.0 * d1 + s * e1) / (h * h);
}

double RkSegment::value(double t, int i) const {
    const auto c = [&](int k) { return r[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]; };
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    return c(0) + s * (c(1) + s1 * (c(2) + s * (c(3) + s1 * (c(4) + s * (c(5) + s1 * (c(6) + s * c(7)))))));
}

StepperResult dop853(const Rhs2& f, double t0, State2 y0, double t_end, const StepperOptions& opt,
                     const std::function<bool(double, const State2&)>& valid) {
    StepperResult res;
    res.t_reached = t0;
    if (t_end == t0) {
        res.completed = true;
        return res;
    }
    const double dir = t_end > t0 ? 1.0 : -1.0;
    const double span = std::abs(t_end - t0);

    std::vector<double> stops;
    for (double b : opt.breakpoints)
        if ((b - t0) * dir > 0 && (t_end - b) * dir > 0) stops.push_back(b);
    std::sort(stops.begin(), stops.end(), [dir](double a, double b) { return a * dir < b * dir; });
    stops.push_back(t_end);
    std::size_t stop_idx = 0;

    auto ok = [&](double t, const State2& y) { return finite(y) && (!valid || valid(t, y)); };
    auto scale = [&](int i, const State2& a, const State2& b) {
        auto k = static_cast<std::size_t>(i);
        return opt.atol + opt.rtol * std::max(std::abs(a[k]), std::abs(b[k]));
    };

    double t = t0;
    State2 y = y0;
    State2 k1 = f(t, y);
    if (!ok(t, y) || !finite(k1)) {
        res.failure = "invalid initial state";
        return res;
    }

    double h = opt.h_initial;
    if (h <= 0.0) {
        // Hairer's starting step heuristic
        double dnf = 0.0, dny = 0.0;
        for (int i = 0; i < 2; ++i) {
            double sk = opt.atol + opt.rtol * std::abs(y[static_cast<std::size_t>(i)]);
            dnf += std::pow(k1[static_cast<std::size_t>(i)] / sk, 2);
            dny += std::pow(y[static_cast<std::size_t>(i)] / sk, 2);
        }
        h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
        h = std::min(h, span);
        State2 y1 = axpy(y, dir * h, {{1.0, &k1}});
        State2 k2 = f(t + dir * h, y1);
        double der2 = 0.0;
        for (int i = 0; i < 2; ++i) {
            auto ii = static_cast<std::size_t>(i);
            double sk = opt.atol + opt.rtol * std::abs(y[ii]);
            der2 += std::pow((k2[ii] - k1[ii]) / sk, 2);
        }
        der2 = std::sqrt(der2 / 2.0) / h;
        double der12 = std::max(std::abs(der2), std::sqrt(dnf / 2.0));
        double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 1.0 / 8.0);
        h = std::min({100 * h, h1, span});
        if (!std::isfinite(h) || h <= 0.0) h = 1e-6 * span;
    }

    bool last_rejected = false;
    long steps = 0;
    while (true) {
        const double target = stops[stop_idx];
        if ((target - t) * dir <= 0.0) {
            if (stop_idx + 1 == stops.size()) break;
            ++stop_idx;
            continue;
        }
        if (++steps > opt.max_steps) {
            res.failure = "step limit exceeded";
            res.t_reached = t;
            return res;
        }
        bool hits = false;
        if (h >= std::abs(target - t) * (1.0 - 1e-12)) {
            h = std::abs(target - t);
            hits = true;
        }
        const double min_h = 1e-14 * std::max(1.0, std::abs(t));
        if (h < min_h) {
            res.failure = "step size collapsed";
            res.t_reached = t;
            return res;
        }
        const double hs = dir * h;

        auto stage_ok = [&](double ts, const State2& ys, State2& ks) {
            if (!ok(ts, ys)) return false;
            ks = f(ts, ys);
            return finite(ks);
        };
        State2 k2, k3, k4, k5, k6, k7, k8, k9, k10, k11, k12, k13;
        State2 yy;
        bool good = true;
        yy = axpy(y, hs, {{a21, &k1}});
        good = good && stage_ok(t + c2 * hs, yy, k2);
        if (good) { yy = axpy(y, hs, {{a31, &k1}, {a32, &k2}}); good = stage_ok(t + c3 * hs, yy, k3); }
        if (good) { yy = axpy(y, hs, {{a41, &k1}, {a43, &k3}}); good = stage_ok(t + c4 * hs, yy, k4); }
        if (good) { yy = axpy(y, hs, {{a51, &k1}, {a53, &k3}, {a54, &k4}}); good = stage_ok(t + c5 * hs, yy, k5); }
        if (good) { yy = axpy(y, hs, {{a61, &k1}, {a64, &k4}, {a65, &k5}}); good = stage_ok(t + c6 * hs, yy, k6); }
        if (good) { yy = axpy(y, hs, {{a71, &k1}, {a74, &k4}, {a75, &k5}, {a76, &k6}}); good = stage_ok(t + c7 * hs, yy, k7); }
        if (good) { yy = axpy(y, hs, {{a81, &k1}, {a84, &k4}, {a85, &k5}, {a86, &k6}, {a87, &k7}}); good = stage_ok(t + c8 * hs, yy, k8); }
        if (good) { yy = axpy(y, hs, {{a91, &k1}, {a94, &k4}, {a95, &k5}, {a96, &k6}, {a97, &k7}, {a98, &k8}}); good = stage_ok(t + c9 * hs, yy, k9); }
        if (good) { yy = axpy(y, hs, {{a101, &k1}, {a104, &k4}, {a105, &k5}, {a106, &k6}, {a107, &k7}, {a108, &k8}, {a109, &k9}}); good = stage_ok(t + c10 * hs, yy, k10); }
        if (good) { yy = axpy(y, hs, {{a111, &k1}, {a114, &k4}, {a115, &k5}, {a116, &k6}, {a117, &k7}, {a118, &k8}, {a119, &k9}, {a1110, &k10}}); good = stage_ok(t + c11 * hs, yy, k11); }
        State2 ynew{};
        const double tnew = hits ? target : t + hs;
        if (good) {
            yy = axpy(y, hs, {{a121, &k1}, {a124, &k4}, {a125, &k5}, {a126, &k6}, {a127, &k7}, {a128, &k8}, {a129, &k9}, {a1210, &k10}, {a1211, &k11}});
            good = stage_ok(t + hs, yy, k12);
        }
        State2 kb{};
        if (good) {
            for (std::size_t i = 0; i < 2; ++i)
                kb[i] = b1 * k1[i] + b6 * k6[i] + b7 * k7[i] + b8 * k8[i] + b9 * k9[i] + b10 * k10[i] + b11 * k11[i] + b12 * k12[i];
            ynew = axpy(y, hs, {{1.0, &kb}});
            good = stage_ok(tnew, ynew, k13);
        }
        if (!good) {
            h *= 0.25;
            last_rejected = true;
            continue;
        }

        double err = 0.0, err2 = 0.0;
        for (int i = 0; i < 2; ++i) {
            auto ii = static_cast<std::size_t>(i);
            double sk = scale(i, y, ynew);
            double e2 = kb[ii] - bhh1 * k1[ii] - bhh2 * k9[ii] - bhh3 * k12[ii];
            double e5 = er1 * k1[ii] + er6 * k6[ii] + er7 * k7[ii] + er8 * k8[ii] + er9 * k9[ii] + er10 * k10[ii] + er11 * k11[ii] + er12 * k12[ii];
            err2 += (e2 / sk) * (e2 / sk);
            err += (e5 / sk) * (e5 / sk);
        }
        double deno = err + 0.01 * err2;
        if (deno <= 0.0) deno = 1.0;
        err = std::abs(h) * err * std::sqrt(1.0 / (2.0 * deno));

        const double fac11 = std::pow(err, 1.0 / 8.0);
        const double fac = std::max(1.0 / 6.0, std::min(1.0 / 0.333, fac11 / 0.9));
        double hnew = h / fac;

        if (err <= 1.0) {
            RkSegment seg;
            seg.t0 = t;
            seg.h = tnew - t;
            const double hd = seg.h;
            State2 ydiff{}, bspl{};
            for (std::size_t i = 0; i < 2; ++i) {
                seg.r[0][i] = y[i];
                ydiff[i] = ynew[i] - y[i];
                seg.r[1][i] = ydiff[i];
                bspl[i] = hd * k1[i] - ydiff[i];
                seg.r[2][i] = bspl[i];
                seg.r[3][i] = ydiff[i] - hd * k13[i] - bspl[i];
                seg.r[4][i] = d41 * k1[i] + d46 * k6[i] + d47 * k7[i] + d48 * k8[i] + d49 * k9[i] + d410 * k10[i] + d411 * k11[i] + d412 * k12[i];
                seg.r[5][i] = d51 * k1[i] + d56 * k6[i] + d57 * k7[i] + d58 * k8[i] + d59 * k9[i] + d510 * k10[i] + d511 * k11[i] + d512 * k12[i];
                seg.r[6][i] = d61 * k1[i] + d66 * k6[i] + d67 * k7[i] + d68 * k8[i] + d69 * k9[i] + d610 * k10[i] + d611 * k11[i] + d612 * k12[i];
                seg.r[7][i] = d71 * k1[i] + d76 * k6[i] + d77 * k7[i] + d78 * k8[i] + d79 * k9[i] + d710 * k10[i] + d711 * k11[i] + d712 * k12[i];
            }
            // three extra stages for the 7th-order extension
            State2 k14, k15, k16;
            yy = axpy(y, hd, {{a141, &k1}, {a147, &k7}, {a148, &k8}, {a149, &k9}, {a1410, &k10}, {a1411, &k11}, {a1412, &k12}, {a1413, &k13}});
            k14 = f(t + c14 * hd, yy);
            yy = axpy(y, hd, {{a151, &k1}, {a156, &k6}, {a157, &k7}, {a158, &k8}, {a1511, &k11}, {a1512, &k12}, {a1513, &k13}, {a1514, &k14}});
            k15 = f(t + c15 * hd, yy);
            yy = axpy(y, hd, {{a161, &k1}, {a166, &k6}, {a167, &k7}, {a168, &k8}, {a169, &k9}, {a1613, &k13}, {a1614, &k14}, {a1615, &k15}});
            k16 = f(t + c16 * hd, yy);
            for (std::size_t i = 0; i < 2; ++i) {
                seg.r[4][i] = hd * (seg.r[4][i] + d413 * k13[i] + d414 * k14[i] + d415 * k15[i] + d416 * k16[i]);
                seg.r[5][i] = hd * (seg.r[5][i] + d513 * k13[i] + d514 * k14[i] + d515 * k15[i] + d516 * k16[i]);
                seg.r[6][i] = hd * (seg.r[6][i] + d613 * k13[i] + d614 * k14[i] + d615 * k15[i] + d616 * k16[i]);
                seg.r[7][i] = hd * (seg.r[7][i] + d713 * k13[i] + d714 * k14[i] + d715 * k15[i] + d716 * k16[i]);
            }
            res.segments.push_back(seg);
            k1 = k13;
            y = ynew;
            t = tnew;
            if (last_rejected) hnew = std::min(hnew, h);
            last_rejected = false;
            h = std::min(hnew, span);
        } else {
            h /= std::min(1.0 / 0.333, fac11 / 0.9);
            last_rejected = true;
        }
    }
    res.completed = true;
    res.t_reached = t;
    return res;
}

}  // namespace minres
