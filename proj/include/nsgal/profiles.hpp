#pragma once

#include "nsgal/torus.hpp"

namespace nsgal {

/// Closed-form decaying velocity profiles on R^3, built as curl(phi a) of a
/// scalar envelope times a constant vector so they are exactly solenoidal
/// before any cutoff: u = grad(phi) x a.
struct ProfileSpec {
    enum class Kind { Zero, BumpCurl, ClayCurl };
    Kind kind = Kind::Zero;
    double support_radius = 2.0;  // bump support (BumpCurl)
    int power = 4;                // bump smoothness exponent (BumpCurl)
    Vec3 axis{0.3, -0.4, 1.0};
    double amplitude = 1.0;

    Vec3 eval(const Vec3& x) const {
        switch (kind) {
            case Kind::Zero:
                return {0.0, 0.0, 0.0};
            case Kind::BumpCurl: {
                // phi = (1 - |x/R|^2)^P inside |x|<R; u = grad(phi) x a
                double R2 = support_radius * support_radius;
                double s2 = dot(x, x) / R2;
                if (s2 >= 1.0) return {0.0, 0.0, 0.0};
                double w = power * std::pow(1.0 - s2, power - 1) * (-2.0 / R2);
                Vec3 g{w * x[0], w * x[1], w * x[2]};
                return amplitude * cross(g, axis);
            }
            case Kind::ClayCurl: {
                // phi = (1+|x|^2)^{-1/2}: |u| decays like (1+|x|)^{-2}
                double q = 1.0 + dot(x, x);
                double w = -std::pow(q, -1.5);
                Vec3 g{w * x[0], w * x[1], w * x[2]};
                return amplitude * cross(g, axis);
            }
        }
        return {0.0, 0.0, 0.0};
    }

    bool compactly_supported() const { return kind != Kind::ClayCurl; }
};

}  // namespace nsgal
