#include "mtp/io.hpp"

#include <ostream>
#include <stdexcept>

#include "arc_builders.hpp"
#include "json17.hpp"

namespace mtp {

namespace {

nlohmann::json vec_to_json(Vec2 v) { return nlohmann::json::array({v.x, v.y}); }

Vec2 vec_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) throw std::runtime_error("domain json: bad point");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::string domain_to_json(const Domain& dom) {
    nlohmann::json root;
    root["format"] = "mtp-domain";
    root["version"] = 1;
    nlohmann::json arcs = nlohmann::json::array();
    for (const auto& arc : dom.arcs()) {
        const ArcDescriptor& d = arc.descriptor();
        if (d.kind.empty())
            throw std::runtime_error("domain_to_json: arc '" + arc.name() +
                                     "' has no serializable descriptor");
        nlohmann::json a;
        a["kind"] = d.kind;
        a["class"] = to_string(arc.cls());
        a["name"] = arc.name();
        if (!d.params.empty()) {
            nlohmann::json prm;
            for (const auto& [k, v] : d.params) prm[k] = v;
            a["params"] = prm;
        }
        if (!d.points.empty()) {
            nlohmann::json pts = nlohmann::json::array();
            for (Vec2 p : d.points) pts.push_back(vec_to_json(p));
            a["points"] = pts;
        }
        if (d.t0 != 0.0 || d.t1 != 1.0) {
            a["t0"] = d.t0;
            a["t1"] = d.t1;
        }
        arcs.push_back(a);
    }
    root["arcs"] = arcs;
    root["polygon_resolution"] = dom.polygon_resolution();
    return dump_json17(root);
}

Domain domain_from_json(const std::string& text, int polygon_resolution) {
    nlohmann::json root = nlohmann::json::parse(text);
    if (!root.contains("arcs") || !root["arcs"].is_array())
        throw std::runtime_error("domain json: missing arcs array");
    if (root.contains("polygon_resolution")) polygon_resolution = root["polygon_resolution"];

    std::vector<BoundaryArc> arcs;
    for (const auto& a : root["arcs"]) {
        std::string kind = a.at("kind").get<std::string>();
        ArcClass cls = arc_class_from_string(a.at("class").get<std::string>());
        std::string name = a.value("name", kind);
        auto prm = [&](const std::string& key) -> double {
            return a.at("params").at(key).get<double>();
        };

        BoundaryArc base = [&]() -> BoundaryArc {
            if (kind == "segment") {
                return detail::segment_arc(vec_from_json(a.at("points")[0]),
                                           vec_from_json(a.at("points")[1]), cls, name);
            }
            if (kind == "circle") {
                return detail::circle_arc({prm("cx"), prm("cy")}, prm("r"), prm("phi0"),
                                          prm("phi1"), cls, name);
            }
            if (kind == "hermite") {
                const auto& pts = a.at("points");
                return detail::hermite_arc(vec_from_json(pts[0]), vec_from_json(pts[1]),
                                           vec_from_json(pts[2]), vec_from_json(pts[3]), cls, name);
            }
            if (kind == "cc-characteristic") {
                return detail::cc_characteristic_arc(static_cast<int>(prm("s")), prm("y0"),
                                                     prm("y1"), name);
            }
            if (kind == "polyline") {
                std::vector<Vec2> pts;
                for (const auto& pj : a.at("points")) pts.push_back(vec_from_json(pj));
                return detail::polyline_arc(std::move(pts), cls, name);
            }
            throw std::runtime_error("domain json: unknown arc kind '" + kind + "'");
        }();

        double t0 = a.value("t0", 0.0);
        double t1 = a.value("t1", 1.0);
        // The base arc is built on [0,1], so restricting by the stored
        // absolute range reproduces the original sub-arc exactly.
        if (t0 != 0.0 || t1 != 1.0)
            arcs.push_back(base.restrict(t0, t1, cls, name));
        else
            arcs.push_back(base);
    }
    return Domain(std::move(arcs), polygon_resolution);
}

void write_polygon_csv(std::ostream& os, const Domain& dom) {
    os << "x,y,arc_id,class\n";
    const auto& poly = dom.polygon();
    const auto& ids = dom.polygon_arc_ids();
    for (size_t k = 0; k < poly.size(); ++k) {
        os << format_double_17(poly[k].x) << ',' << format_double_17(poly[k].y) << ',' << ids[k]
           << ',' << to_string(dom.arcs()[ids[k]].cls()) << '\n';
    }
}

}  // namespace mtp
