#ifndef GMAPPER_GRAPH_IO_HPP
#define GMAPPER_GRAPH_IO_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdio>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "mapper.hpp"

namespace gmapper::io {

enum class GraphFormat { Json, Dot, GraphMl };

inline GraphFormat parse_format(std::string_view text) {
    if (text == "json") return GraphFormat::Json;
    if (text == "dot") return GraphFormat::Dot;
    if (text == "graphml") return GraphFormat::GraphMl;
    throw Error(ErrorCode::UnsupportedFormat, "unsupported graph format '" + std::string(text) + "'");
}

inline nlohmann::ordered_json to_json(const MapperGraph& g, bool include_members = true) {
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (const auto& node : g.nodes) {
        nlohmann::ordered_json j;
        j["id"] = node.id;
        j["interval"] = node.interval_index;
        j["size"] = node.members.size();
        if (include_members) j["members"] = node.members;
        j["mean_lens"] = node.mean_lens;
        j["labels"] = nlohmann::ordered_json::object();
        for (const auto& [label, count] : node.label_histogram) j["labels"][label] = count;
        nodes.push_back(std::move(j));
    }
    nlohmann::ordered_json edges = nlohmann::ordered_json::array();
    for (const auto& e : g.edges) edges.push_back({{"a", e.a}, {"b", e.b}, {"shared", e.shared}});

    nlohmann::ordered_json out;
    out["nodes"] = std::move(nodes);
    out["edges"] = std::move(edges);
    out["provenance"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : g.provenance) out["provenance"][key] = value;
    return out;
}

inline std::string to_json_string(const MapperGraph& g, bool include_members = true) {
    return to_json(g, include_members).dump(2) + "\n";
}

/// Parses the graph JSON written by to_json. When members were omitted the
/// nodes come back with empty member lists.
inline MapperGraph graph_from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::ParseError, "invalid JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    try {
        MapperGraph g;
        for (const auto& j : doc.at("nodes")) {
            MapperNode node;
            node.id = j.at("id").get<std::size_t>();
            node.interval_index = j.at("interval").get<std::size_t>();
            if (j.contains("members")) node.members = j.at("members").get<std::vector<std::size_t>>();
            node.mean_lens = j.at("mean_lens").get<double>();
            if (j.contains("labels"))
                for (const auto& [label, count] : j.at("labels").items()) node.label_histogram[label] = count.get<std::size_t>();
            if (node.id != g.nodes.size()) throw Error(ErrorCode::ParseError, "node ids must be 0..n-1 in order");
            g.nodes.push_back(std::move(node));
        }
        for (const auto& j : doc.at("edges")) {
            MapperEdge e{j.at("a").get<std::size_t>(), j.at("b").get<std::size_t>(), j.at("shared").get<std::size_t>()};
            if (e.a >= g.nodes.size() || e.b >= g.nodes.size())
                throw Error(ErrorCode::ParseError, "edge refers to a missing node");
            g.edges.push_back(e);
        }
        if (doc.contains("provenance"))
            for (const auto& [key, value] : doc.at("provenance").items())
                g.provenance[key] = value.is_string() ? value.get<std::string>() : value.dump();
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("graph JSON does not match the schema: ") + e.what());
    }
}

namespace detail {

inline constexpr std::array<std::string_view, 10> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                              "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

inline std::string fixed(double v, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

inline std::string escape(std::string_view text, bool xml) {
    std::string out;
    for (char ch : text) {
        if (xml) {
            switch (ch) {
                case '&': out += "&amp;"; break;
                case '<': out += "&lt;"; break;
                case '>': out += "&gt;"; break;
                case '"': out += "&quot;"; break;
                default: out += ch;
            }
        } else {
            if (ch == '"' || ch == '\\') out += '\\';
            out += ch;
        }
    }
    return out;
}

inline std::string histogram_text(const MapperNode& node) {
    std::string out;
    for (const auto& [label, count] : node.label_histogram) {
        if (!out.empty()) out += ';';
        out += label + ":" + std::to_string(count);
    }
    return out;
}

inline std::size_t node_size(const MapperNode& node) {
    if (!node.members.empty()) return node.members.size();
    std::size_t total = 0;
    for (const auto& [label, count] : node.label_histogram) total += count;
    return total;
}

// Rainbow hue from lens value: low values blue, high values red.
inline std::string rainbow(double mean_lens) {
    const double t = std::clamp(mean_lens, 0.0, 1.0);
    return fixed(0.7 * (1.0 - t), 3) + " 1.000 1.000";
}

}  // namespace detail

/// Graphviz rendering. Node labels show mean_lens to 3 decimals; nodes with
/// label histograms are drawn as pie charts (style=wedged), others are filled
/// with a rainbow color of their mean lens value.
inline std::string to_dot(const MapperGraph& g) {
    std::set<std::string> all_labels;
    for (const auto& node : g.nodes)
        for (const auto& [label, count] : node.label_histogram) all_labels.insert(label);
    std::map<std::string, std::string_view> color;
    std::size_t k = 0;
    for (const auto& label : all_labels) color[label] = detail::kPalette[k++ % detail::kPalette.size()];

    std::ostringstream out;
    out << "digraph mapper {\n";
    out << "  edge [dir=none];\n";
    out << "  node [shape=circle, style=filled];\n";
    for (const auto& node : g.nodes) {
        const std::size_t size = detail::node_size(node);
        out << "  n" << node.id << " [label=\"" << detail::fixed(node.mean_lens, 3) << "\", mean_lens="
            << detail::fixed(node.mean_lens, 6) << ", interval=" << node.interval_index << ", size=" << size;
        if (!node.label_histogram.empty()) {
            std::string fill;
            for (const auto& [label, count] : node.label_histogram) {
                if (!fill.empty()) fill += ':';
                fill += std::string(color[label]) + ";" +
                        detail::fixed(static_cast<double>(count) / static_cast<double>(std::max<std::size_t>(size, 1)), 3);
            }
            out << ", labels=\"" << detail::escape(detail::histogram_text(node), false) << "\", style=wedged, fillcolor=\""
                << fill << "\"";
        } else {
            out << ", fillcolor=\"" << detail::rainbow(node.mean_lens) << "\"";
        }
        out << "];\n";
    }
    for (const auto& e : g.edges) out << "  n" << e.a << " -> n" << e.b << " [shared=" << e.shared << "];\n";
    out << "}\n";
    return out.str();
}

inline std::string to_graphml(const MapperGraph& g) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"mean_lens\" for=\"node\" attr.name=\"mean_lens\" attr.type=\"double\"/>\n"
        << "  <key id=\"interval\" for=\"node\" attr.name=\"interval\" attr.type=\"int\"/>\n"
        << "  <key id=\"size\" for=\"node\" attr.name=\"size\" attr.type=\"int\"/>\n"
        << "  <key id=\"labels\" for=\"node\" attr.name=\"labels\" attr.type=\"string\"/>\n"
        << "  <key id=\"shared\" for=\"edge\" attr.name=\"shared\" attr.type=\"int\"/>\n"
        << "  <graph id=\"mapper\" edgedefault=\"undirected\">\n";
    for (const auto& node : g.nodes) {
        out << "    <node id=\"n" << node.id << "\">\n"
            << "      <data key=\"mean_lens\">" << detail::fixed(node.mean_lens, 6) << "</data>\n"
            << "      <data key=\"interval\">" << node.interval_index << "</data>\n"
            << "      <data key=\"size\">" << detail::node_size(node) << "</data>\n"
            << "      <data key=\"labels\">" << detail::escape(detail::histogram_text(node), true) << "</data>\n"
            << "    </node>\n";
    }
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        out << "    <edge id=\"e" << i << "\" source=\"n" << e.a << "\" target=\"n" << e.b << "\">\n"
            << "      <data key=\"shared\">" << e.shared << "</data>\n"
            << "    </edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
    return out.str();
}

inline std::string render(const MapperGraph& g, GraphFormat format, bool include_members = true) {
    switch (format) {
        case GraphFormat::Json: return to_json_string(g, include_members);
        case GraphFormat::Dot: return to_dot(g);
        case GraphFormat::GraphMl: return to_graphml(g);
    }
    throw Error(ErrorCode::UnsupportedFormat, "unknown format");
}

}  // namespace gmapper::io

#endif  // GMAPPER_GRAPH_IO_HPP
