#include "sirs/incidence.hpp"

#include "sirs/error.hpp"

#include <cmath>
#include <sstream>

namespace sirs {

namespace {

constexpr int kGridPoints = 50;

void require_param(double value, bool strictly_positive, const std::string& what, const char* name)
{
    const bool ok = std::isfinite(value) && (strictly_positive ? value > 0.0 : value >= 0.0);
    if (!ok) {
        std::ostringstream msg;
        msg << what << "." << name << " must be " << (strictly_positive ? "> 0" : ">= 0")
            << " (got " << value << ")";
        throw Error(ErrorKind::InvalidArgument, msg.str());
    }
}

} // namespace

std::string family_name(const IncidenceFunction& f)
{
    struct Visitor {
        std::string operator()(const Constant&) const { return "constant"; }
        std::string operator()(const SaturatedInI&) const { return "saturated_i"; }
        std::string operator()(const SaturatedInS&) const { return "saturated_s"; }
        std::string operator()(const BeddingtonDeAngelis&) const { return "beddington_deangelis"; }
        std::string operator()(const CustomIncidence& c) const { return c.name; }
    };
    return std::visit(Visitor{}, f);
}

void check_incidence(const IncidenceFunction& f, double capacity, const std::string& what)
{
    if (const auto* c = std::get_if<Constant>(&f)) {
        require_param(c->beta, false, what, "beta");
    }
    else if (const auto* c = std::get_if<SaturatedInI>(&f)) {
        require_param(c->beta, false, what, "beta");
        require_param(c->a, false, what, "a");
    }
    else if (const auto* c = std::get_if<SaturatedInS>(&f)) {
        require_param(c->beta, false, what, "beta");
        require_param(c->a, false, what, "a");
    }
    else if (const auto* c = std::get_if<BeddingtonDeAngelis>(&f)) {
        require_param(c->beta, false, what, "beta");
        require_param(c->a1, false, what, "a1");
        require_param(c->a2, false, what, "a2");
    }
    else if (const auto* c = std::get_if<CustomIncidence>(&f)) {
        require(static_cast<bool>(c->rule), what + ": custom incidence has no rule");
    }

    for (int i = 0; i < kGridPoints; ++i) {
        for (int j = 0; j < kGridPoints; ++j) {
            const double S = capacity * i / (kGridPoints - 1);
            const double I = capacity * j / (kGridPoints - 1);
            const double v = eval_incidence(f, S, I);
            if (!std::isfinite(v) || v < 0.0) {
                std::ostringstream msg;
                msg << what << ": incidence " << family_name(f) << " evaluates to " << v
                    << " at (S, I) = (" << S << ", " << I << ")";
                throw Error(ErrorKind::InvalidArgument, msg.str());
            }
        }
    }
}

} // namespace sirs
