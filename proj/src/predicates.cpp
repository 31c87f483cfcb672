#include "pvt/predicates.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace pvt {

namespace {

using Rational = boost::multiprecision::cpp_rational;

int sign_of(const Rational& r) {
    if (r > 0) return 1;
    if (r < 0) return -1;
    return 0;
}

int orient2d_exact(Vec2 a, Vec2 b, Vec2 c) {
    Rational ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
    Rational det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
    return sign_of(det);
}

int incircle_exact(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    Rational ax = Rational(a.x) - Rational(d.x);
    Rational ay = Rational(a.y) - Rational(d.y);
    Rational bx = Rational(b.x) - Rational(d.x);
    Rational by = Rational(b.y) - Rational(d.y);
    Rational cx = Rational(c.x) - Rational(d.x);
    Rational cy = Rational(c.y) - Rational(d.y);
    Rational alift = ax * ax + ay * ay;
    Rational blift = bx * bx + by * by;
    Rational clift = cx * cx + cy * cy;
    Rational det = alift * (bx * cy - by * cx) - blift * (ax * cy - ay * cx) +
                   clift * (ax * by - ay * bx);
    return sign_of(det);
}

// Static filter constants, cf. Shewchuk's robust predicates.
constexpr double kEps = 1.1102230246251565e-16;  // 2^-53
constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIncircleBound = (10.0 + 96.0 * kEps) * kEps;

}  // namespace

int orient2d(Vec2 a, Vec2 b, Vec2 c) {
    double detleft = (b.x - a.x) * (c.y - a.y);
    double detright = (b.y - a.y) * (c.x - a.x);
    double det = detleft - detright;
    double detsum = std::abs(detleft) + std::abs(detright);
    if (std::abs(det) > kOrientBound * detsum) return det > 0 ? 1 : -1;
    return orient2d_exact(a, b, c);
}

int incircle(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    double adx = a.x - d.x, ady = a.y - d.y;
    double bdx = b.x - d.x, bdy = b.y - d.y;
    double cdx = c.x - d.x, cdy = c.y - d.y;

    double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    double alift = adx * adx + ady * ady;
    double cdxady = cdx * ady, adxcdy = adx * cdy;
    double blift = bdx * bdx + bdy * bdy;
    double adxbdy = adx * bdy, bdxady = bdx * ady;
    double clift = cdx * cdx + cdy * cdy;

    double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                 clift * (adxbdy - bdxady);
    double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                       (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                       (std::abs(adxbdy) + std::abs(bdxady)) * clift;
    if (std::abs(det) > kIncircleBound * permanent) return det > 0 ? 1 : -1;
    return incircle_exact(a, b, c, d);
}

}  // namespace pvt
