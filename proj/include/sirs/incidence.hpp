#pragma once

#include <functional>
#include <string>
#include <variant>

namespace sirs {

// F(S, I) families. `beta` is the scale of the family: the transmission
// coefficient when used as F1, the noise intensity when used as F2.

/// F = beta (bilinear incidence)
struct Constant {
    double beta;
};

/// F = beta / (1 + a I)
struct SaturatedInI {
    double beta;
    double a;
};

/// F = beta / (1 + a S)
struct SaturatedInS {
    double beta;
    double a;
};

/// F = beta / (1 + a1 S + a2 I)
struct BeddingtonDeAngelis {
    double beta;
    double a1;
    double a2;
};

/// User-supplied rule. Must be nonnegative and locally Lipschitz on the
/// invariant set; checked on a grid when the model is built.
struct CustomIncidence {
    std::string name;
    std::function<double(double S, double I)> rule;
};

using IncidenceFunction =
    std::variant<Constant, SaturatedInI, SaturatedInS, BeddingtonDeAngelis, CustomIncidence>;

inline double eval_incidence(const IncidenceFunction& f, double S, double I)
{
    struct Visitor {
        double S;
        double I;
        double operator()(const Constant& c) const { return c.beta; }
        double operator()(const SaturatedInI& c) const { return c.beta / (1.0 + c.a * I); }
        double operator()(const SaturatedInS& c) const { return c.beta / (1.0 + c.a * S); }
        double operator()(const BeddingtonDeAngelis& c) const
        {
            return c.beta / (1.0 + c.a1 * S + c.a2 * I);
        }
        double operator()(const CustomIncidence& c) const { return c.rule(S, I); }
    };
    return std::visit(Visitor{S, I}, f);
}

/// "constant", "saturated_i", "saturated_s", "beddington_deangelis" or the
/// custom rule's name.
std::string family_name(const IncidenceFunction& f);

/// Parameter checks (beta >= 0, saturation constants >= 0) followed by a
/// 50x50 grid check over [0, K]^2 that F is finite and nonnegative.
/// `what` prefixes error messages.
void check_incidence(const IncidenceFunction& f, double capacity, const std::string& what);

} // namespace sirs
