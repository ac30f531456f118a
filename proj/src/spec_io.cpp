#include "chartmorph/spec_io.hpp"
#include "chartmorph/util.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

namespace chartmorph {

const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::SemanticViolation: return "SemanticViolation";
    case ErrorCode::AggregateOnNonNumeric: return "AggregateOnNonNumeric";
    case ErrorCode::NegativeValueInPie: return "NegativeValueInPie";
    case ErrorCode::UnsupportedCombination: return "UnsupportedCombination";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NonPositiveTotal: return "NonPositiveTotal";
    case ErrorCode::CyclicPriority: return "CyclicPriority";
    case ErrorCode::MissingCorrespondence: return "MissingCorrespondence";
    case ErrorCode::AmbiguousClassification: return "AmbiguousClassification";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    }
    return "Unknown";
}

namespace {

ErrorCode dominant_code(const std::vector<Violation>& violations)
{
    auto has = [&](ErrorCode c) {
        return std::any_of(violations.begin(), violations.end(),
                           [c](const Violation& v) { return v.code == c; });
    };
    if (has(ErrorCode::MalformedDocument))
        return ErrorCode::MalformedDocument;
    if (has(ErrorCode::SchemaViolation))
        return ErrorCode::SchemaViolation;
    return ErrorCode::SemanticViolation;
}

std::string summarize(const std::vector<Violation>& violations)
{
    std::string out = std::to_string(violations.size()) + " violation(s)";
    for (const auto& v : violations)
        out += "; " + v.path + ": " + v.message;
    return out;
}

} // namespace

InputError::InputError(std::vector<Violation> violations)
    : ChartError(dominant_code(violations), summarize(violations)),
      violations_(std::move(violations))
{
}

std::string format_number(double value)
{
    if (value == 0.0)
        return "0";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string format_fixed3(double value)
{
    double rounded = std::round(value * 1000.0) / 1000.0;
    if (rounded == 0.0)
        return "0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", rounded);
    std::string s(buf);
    while (!s.empty() && s.back() == '0')
        s.pop_back();
    if (!s.empty() && s.back() == '.')
        s.pop_back();
    return s;
}

bool nearly_equal(double a, double b, double relTol)
{
    if (a == b)
        return true;
    return std::fabs(a - b) <= relTol * std::max(std::fabs(a), std::fabs(b));
}

std::string cell_label(const Cell& cell)
{
    if (const auto* s = std::get_if<std::string>(&cell))
        return *s;
    return format_number(std::get<double>(cell));
}

std::optional<std::size_t> DataTable::column_index(std::string_view name) const
{
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i].name == name)
            return i;
    return std::nullopt;
}

const Column* DataTable::find_column(std::string_view name) const
{
    auto idx = column_index(name);
    return idx ? &columns[*idx] : nullptr;
}

const char* to_string(ChartType type)
{
    switch (type) {
    case ChartType::BarV: return "barV";
    case ChartType::BarH: return "barH";
    case ChartType::Line: return "line";
    case ChartType::Pie: return "pie";
    case ChartType::Scatter: return "scatter";
    }
    return "?";
}

const char* to_string(Aggregate aggregate)
{
    switch (aggregate) {
    case Aggregate::Sum: return "sum";
    case Aggregate::Avg: return "avg";
    case Aggregate::Count: return "count";
    case Aggregate::None: return "none";
    }
    return "?";
}

std::optional<ChartType> parse_chart_type(std::string_view text)
{
    for (auto t : kAllChartTypes)
        if (text == to_string(t))
            return t;
    return std::nullopt;
}

std::optional<Aggregate> parse_aggregate(std::string_view text)
{
    for (auto a : {Aggregate::Sum, Aggregate::Avg, Aggregate::Count, Aggregate::None})
        if (text == to_string(a))
            return a;
    return std::nullopt;
}

std::vector<std::string> ChartSpec::dimensions() const
{
    std::vector<std::string> dims;
    if (xDimension)
        dims.push_back(*xDimension);
    if (legendDimension)
        dims.push_back(*legendDimension);
    return dims;
}

bool ChartSpec::raw_values() const
{
    return !measures.empty() && std::all_of(measures.begin(), measures.end(), [](const MeasureRef& m) {
        return m.aggregate == Aggregate::None;
    });
}

std::optional<std::vector<int>> temporal_key(std::string_view label, std::string_view format)
{
    static constexpr std::string_view tokens[] = {"YYYY", "MM", "DD", "HH", "mm", "ss"};
    std::vector<int> key;
    if (label.size() != format.size())
        return std::nullopt;
    for (auto token : tokens) {
        auto pos = format.find(token);
        if (pos == std::string_view::npos)
            continue;
        int value = 0;
        auto field = label.substr(pos, token.size());
        auto res = std::from_chars(field.data(), field.data() + field.size(), value);
        if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
            return std::nullopt;
        key.push_back(value);
    }
    return key;
}

namespace {

class Collector {
public:
    explicit Collector(std::string prefix) : prefix_(std::move(prefix)) {}

    void add(ErrorCode code, std::string rule, const std::string& path, std::string message)
    {
        out.push_back({code, std::move(rule), prefix_ + path, std::move(message)});
    }

    std::vector<Violation> out;

private:
    std::string prefix_;
};

void reject_unknown(Collector& c, const Json& obj, std::initializer_list<std::string_view> allowed,
                    const std::string& path)
{
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            c.add(ErrorCode::SchemaViolation, "UnknownField", path + "." + it.key(),
                  "unknown field '" + it.key() + "'");
    }
}

const Json* require(Collector& c, const Json& obj, const char* key, Json::value_t type,
                    const std::string& path, const char* typeName)
{
    auto it = obj.find(key);
    if (it == obj.end()) {
        c.add(ErrorCode::SchemaViolation, "MissingField", path + "." + key,
              std::string("missing required field '") + key + "'");
        return nullptr;
    }
    bool ok = it->type() == type ||
              (type == Json::value_t::number_float && it->is_number());
    if (!ok) {
        c.add(ErrorCode::SchemaViolation, "WrongType", path + "." + key,
              std::string("field '") + key + "' must be " + typeName);
        return nullptr;
    }
    return &*it;
}

const Json* optional_field(Collector& c, const Json& obj, const char* key, Json::value_t type,
                           const std::string& path, const char* typeName)
{
    if (!obj.contains(key))
        return nullptr;
    return require(c, obj, key, type, path, typeName);
}

void parse_table(Collector& c, const Json& data, DataTable& table)
{
    reject_unknown(c, data, {"columns", "rows"}, "data");
    if (const Json* cols = require(c, data, "columns", Json::value_t::array, "data", "an array")) {
        std::set<std::string> seen;
        for (std::size_t i = 0; i < cols->size(); ++i) {
            const Json& col = (*cols)[i];
            std::string path = "data.columns[" + std::to_string(i) + "]";
            if (!col.is_object()) {
                c.add(ErrorCode::SchemaViolation, "WrongType", path, "column must be an object");
                continue;
            }
            reject_unknown(c, col, {"name", "role", "valueType", "format"}, path);
            Column column;
            bool ok = true;
            if (const Json* n = require(c, col, "name", Json::value_t::string, path, "a string"))
                column.name = n->get<std::string>();
            else
                ok = false;
            if (const Json* r = require(c, col, "role", Json::value_t::string, path, "a string")) {
                auto role = r->get<std::string>();
                if (role == "dimension")
                    column.role = ColumnRole::Dimension;
                else if (role == "measure")
                    column.role = ColumnRole::Measure;
                else {
                    c.add(ErrorCode::SchemaViolation, "BadEnum", path + ".role",
                          "role must be 'dimension' or 'measure'");
                    ok = false;
                }
            } else {
                ok = false;
            }
            if (const Json* v = require(c, col, "valueType", Json::value_t::string, path, "a string")) {
                auto vt = v->get<std::string>();
                if (vt == "categorical")
                    column.valueType = ValueType::Categorical;
                else if (vt == "temporal")
                    column.valueType = ValueType::Temporal;
                else if (vt == "numeric")
                    column.valueType = ValueType::Numeric;
                else {
                    c.add(ErrorCode::SchemaViolation, "BadEnum", path + ".valueType",
                          "valueType must be 'categorical', 'temporal' or 'numeric'");
                    ok = false;
                }
            } else {
                ok = false;
            }
            if (const Json* f = optional_field(c, col, "format", Json::value_t::string, path, "a string"))
                column.format = f->get<std::string>();
            if (!ok)
                continue;
            if (!seen.insert(column.name).second)
                c.add(ErrorCode::SemanticViolation, "DuplicateColumn", path + ".name",
                      "duplicate column name '" + column.name + "'");
            if (column.role == ColumnRole::Measure && column.valueType != ValueType::Numeric)
                c.add(ErrorCode::SemanticViolation, "RoleMismatch", path,
                      "measure column '" + column.name + "' must be numeric");
            if (column.role == ColumnRole::Dimension && column.valueType == ValueType::Numeric)
                c.add(ErrorCode::SemanticViolation, "RoleMismatch", path,
                      "dimension column '" + column.name + "' must be categorical or temporal");
            if (column.format && column.valueType != ValueType::Temporal)
                c.add(ErrorCode::SemanticViolation, "FormatOnNonTemporal", path + ".format",
                      "format is only allowed on temporal columns");
            table.columns.push_back(std::move(column));
        }
    }
    const Json* rows = require(c, data, "rows", Json::value_t::array, "data", "an array");
    if (!rows)
        return;
    for (std::size_t i = 0; i < rows->size(); ++i) {
        const Json& row = (*rows)[i];
        std::string path = "data.rows[" + std::to_string(i) + "]";
        if (!row.is_object()) {
            c.add(ErrorCode::SchemaViolation, "WrongType", path, "row must be an object");
            continue;
        }
        for (auto it = row.begin(); it != row.end(); ++it) {
            if (!table.column_index(it.key()))
                c.add(ErrorCode::SchemaViolation, "UnknownField", path + "." + it.key(),
                      "row value for undeclared column '" + it.key() + "'");
        }
        std::vector<Cell> cells;
        cells.reserve(table.columns.size());
        for (const auto& column : table.columns) {
            auto it = row.find(column.name);
            std::string cellPath = path + "." + column.name;
            if (it == row.end()) {
                c.add(ErrorCode::SchemaViolation, "MissingValue", cellPath,
                      "row has no value for column '" + column.name + "'");
                cells.emplace_back(std::string{});
                continue;
            }
            if (it->is_string()) {
                if (column.role == ColumnRole::Measure)
                    c.add(ErrorCode::SemanticViolation, "RoleMismatch", cellPath,
                          "measure column '" + column.name + "' holds a non-numeric value");
                if (column.format && !temporal_key(it->get<std::string>(), *column.format))
                    c.add(ErrorCode::SemanticViolation, "TemporalFormat", cellPath,
                          "value does not match format '" + *column.format + "'");
                cells.emplace_back(it->get<std::string>());
            } else if (it->is_number()) {
                double v = it->get<double>();
                if (!std::isfinite(v))
                    c.add(ErrorCode::SemanticViolation, "NonFinite", cellPath, "value must be finite");
                cells.emplace_back(v);
            } else {
                c.add(ErrorCode::SchemaViolation, "WrongType", cellPath,
                      "cell must be a string or a number");
                cells.emplace_back(std::string{});
            }
        }
        table.rows.push_back(std::move(cells));
    }
}

void parse_chart(Collector& c, const Json& chart, ChartSpec& spec)
{
    reject_unknown(c, chart,
                   {"type", "x", "legend", "measures", "sort", "showXAxis", "showYAxis", "showLegend",
                    "title", "labelMap"},
                   "chart");
    if (const Json* t = require(c, chart, "type", Json::value_t::string, "chart", "a string")) {
        if (auto type = parse_chart_type(t->get<std::string>()))
            spec.type = *type;
        else
            c.add(ErrorCode::SchemaViolation, "BadEnum", "chart.type",
                  "type must be one of barV, barH, line, pie, scatter");
    }
    if (const Json* x = optional_field(c, chart, "x", Json::value_t::string, "chart", "a string"))
        spec.xDimension = x->get<std::string>();
    if (const Json* l = optional_field(c, chart, "legend", Json::value_t::string, "chart", "a string"))
        spec.legendDimension = l->get<std::string>();
    if (const Json* ms = require(c, chart, "measures", Json::value_t::array, "chart", "an array")) {
        for (std::size_t i = 0; i < ms->size(); ++i) {
            const Json& m = (*ms)[i];
            std::string path = "chart.measures[" + std::to_string(i) + "]";
            if (!m.is_object()) {
                c.add(ErrorCode::SchemaViolation, "WrongType", path, "measure must be an object");
                continue;
            }
            reject_unknown(c, m, {"column", "aggregate"}, path);
            MeasureRef ref;
            if (const Json* col = require(c, m, "column", Json::value_t::string, path, "a string"))
                ref.column = col->get<std::string>();
            if (const Json* a = require(c, m, "aggregate", Json::value_t::string, path, "a string")) {
                if (auto agg = parse_aggregate(a->get<std::string>()))
                    ref.aggregate = *agg;
                else
                    c.add(ErrorCode::SchemaViolation, "BadEnum", path + ".aggregate",
                          "aggregate must be one of sum, avg, count, none");
            }
            spec.measures.push_back(std::move(ref));
        }
    }
    if (const Json* s = optional_field(c, chart, "sort", Json::value_t::object, "chart", "an object")) {
        reject_unknown(c, *s, {"by", "direction"}, "chart.sort");
        SortOrder order;
        if (const Json* by = require(c, *s, "by", Json::value_t::string, "chart.sort", "a string")) {
            auto v = by->get<std::string>();
            if (v == "measure")
                order.by = SortBy::Measure;
            else if (v == "label")
                order.by = SortBy::Label;
            else
                c.add(ErrorCode::SchemaViolation, "BadEnum", "chart.sort.by", "by must be 'measure' or 'label'");
        }
        if (const Json* d = require(c, *s, "direction", Json::value_t::string, "chart.sort", "a string")) {
            auto v = d->get<std::string>();
            if (v == "asc" || v == "desc")
                order.descending = v == "desc";
            else
                c.add(ErrorCode::SchemaViolation, "BadEnum", "chart.sort.direction",
                      "direction must be 'asc' or 'desc'");
        }
        spec.sortOrder = order;
    }
    if (const Json* b = optional_field(c, chart, "showXAxis", Json::value_t::boolean, "chart", "a boolean"))
        spec.showXAxis = b->get<bool>();
    if (const Json* b = optional_field(c, chart, "showYAxis", Json::value_t::boolean, "chart", "a boolean"))
        spec.showYAxis = b->get<bool>();
    if (const Json* b = optional_field(c, chart, "showLegend", Json::value_t::boolean, "chart", "a boolean"))
        spec.showLegend = b->get<bool>();
    if (const Json* t = optional_field(c, chart, "title", Json::value_t::string, "chart", "a string"))
        spec.title = t->get<std::string>();
    if (const Json* lm = optional_field(c, chart, "labelMap", Json::value_t::object, "chart", "an object")) {
        for (auto col = lm->begin(); col != lm->end(); ++col) {
            std::string path = "chart.labelMap." + col.key();
            if (!col->is_object()) {
                c.add(ErrorCode::SchemaViolation, "WrongType", path, "labelMap entry must be an object");
                continue;
            }
            for (auto g = col->begin(); g != col->end(); ++g) {
                LabelGroup group{col.key(), g.key(), {}};
                bool ok = g->is_array();
                if (ok)
                    for (const auto& member : *g)
                        ok = ok && member.is_string();
                if (!ok) {
                    c.add(ErrorCode::SchemaViolation, "WrongType", path + "." + g.key(),
                          "group members must be an array of strings");
                    continue;
                }
                for (const auto& member : *g)
                    group.members.push_back(member.get<std::string>());
                spec.labelMap.push_back(std::move(group));
            }
        }
    }
}

} // namespace

std::vector<Violation> validate_spec(const DataTable& table, const ChartSpec& spec)
{
    Collector c("");
    auto check_dimension = [&](const std::optional<std::string>& name, const char* field) {
        if (!name)
            return;
        const Column* col = table.find_column(*name);
        std::string path = std::string("chart.") + field;
        if (!col)
            c.add(ErrorCode::SemanticViolation, "UnknownColumn", path, "unknown column '" + *name + "'");
        else if (col->role != ColumnRole::Dimension)
            c.add(ErrorCode::SemanticViolation, "RoleMismatch", path,
                  "column '" + *name + "' is not a dimension");
    };
    check_dimension(spec.xDimension, "x");
    check_dimension(spec.legendDimension, "legend");
    if (spec.xDimension && spec.legendDimension && *spec.xDimension == *spec.legendDimension)
        c.add(ErrorCode::SemanticViolation, "DuplicateDimension", "chart.legend",
              "x and legend must map different dimensions");

    if (spec.measures.empty())
        c.add(ErrorCode::SemanticViolation, "NoMeasure", "chart.measures", "at least one measure is required");
    std::set<std::string> seenMeasures;
    std::size_t rawCount = 0;
    for (std::size_t i = 0; i < spec.measures.size(); ++i) {
        const auto& m = spec.measures[i];
        std::string path = "chart.measures[" + std::to_string(i) + "].column";
        const Column* col = table.find_column(m.column);
        if (!col)
            c.add(ErrorCode::SemanticViolation, "UnknownColumn", path, "unknown column '" + m.column + "'");
        else if (col->role != ColumnRole::Measure)
            c.add(ErrorCode::SemanticViolation, "RoleMismatch", path,
                  "column '" + m.column + "' is not a measure");
        if (!seenMeasures.insert(m.column).second)
            c.add(ErrorCode::SemanticViolation, "DuplicateMeasure", path,
                  "measure '" + m.column + "' listed twice");
        if (m.aggregate == Aggregate::None)
            ++rawCount;
    }

    const bool hasX = spec.xDimension.has_value();
    const bool hasLegend = spec.legendDimension.has_value();
    auto combo = [&](const std::string& msg) {
        c.add(ErrorCode::SemanticViolation, "UnsupportedEncoding", "chart", msg);
    };
    if (rawCount > 0 && spec.type != ChartType::Scatter)
        combo("aggregate 'none' is only supported by scatter charts");
    if (rawCount > 0 && rawCount != spec.measures.size())
        combo("scatter measures must be all raw or all aggregated");
    switch (spec.type) {
    case ChartType::Pie:
        if (hasX == hasLegend)
            combo("pie requires exactly one mapped dimension");
        if (spec.measures.size() != 1)
            combo("pie requires exactly one measure");
        break;
    case ChartType::Line:
        if (!hasX)
            combo("line requires an x dimension");
        break;
    case ChartType::BarV:
    case ChartType::BarH:
    case ChartType::Scatter:
        if (hasLegend && !hasX)
            combo(std::string(to_string(spec.type)) + " legend dimension requires an x dimension");
        break;
    }

    if (spec.type == ChartType::Pie) {
        for (const auto& m : spec.measures) {
            auto idx = table.column_index(m.column);
            if (!idx)
                continue;
            for (const auto& row : table.rows) {
                const auto* v = std::get_if<double>(&row[*idx]);
                if (v && *v < 0) {
                    c.add(ErrorCode::NegativeValueInPie, "NonNegativePie", "data.rows",
                          "pie measure '" + m.column + "' has negative values");
                    break;
                }
            }
        }
    }

    for (std::size_t i = 0; i < spec.labelMap.size(); ++i) {
        const auto& g = spec.labelMap[i];
        std::string path = "chart.labelMap." + g.column;
        const Column* col = table.find_column(g.column);
        if (!col || col->role != ColumnRole::Dimension)
            c.add(ErrorCode::SemanticViolation, "UnknownColumn", path,
                  "labelMap column '" + g.column + "' is not a dimension");
        if (g.members.empty())
            c.add(ErrorCode::SemanticViolation, "EmptyGroup", path + "." + g.group, "group has no members");
    }
    return c.out;
}

ChartDocument parse_chart_document(const Json& document, const std::string& pathPrefix)
{
    Collector c(pathPrefix);
    ChartDocument doc;
    if (!document.is_object()) {
        c.add(ErrorCode::SchemaViolation, "WrongType", "", "document must be an object");
        throw InputError(std::move(c.out));
    }
    reject_unknown(c, document, {"data", "chart"}, "");
    if (const Json* data = require(c, document, "data", Json::value_t::object, "", "an object"))
        parse_table(c, *data, doc.table);
    if (const Json* chart = require(c, document, "chart", Json::value_t::object, "", "an object"))
        parse_chart(c, *chart, doc.chart);
    // Fix up paths: fields were recorded as ".data" / ".chart" at top level.
    for (auto& v : c.out)
        if (v.path.size() > pathPrefix.size() && v.path[pathPrefix.size()] == '.')
            v.path.erase(pathPrefix.size(), 1);
    if (c.out.empty()) {
        for (auto v : validate_spec(doc.table, doc.chart)) {
            v.path = pathPrefix + v.path;
            c.out.push_back(std::move(v));
        }
    }
    if (!c.out.empty())
        throw InputError(std::move(c.out));
    return doc;
}

ChartDocument parse_chart_document(std::string_view text, const std::string& pathPrefix)
{
    Json document;
    try {
        document = Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        throw InputError({{ErrorCode::MalformedDocument, "Syntax", pathPrefix.empty() ? "$" : pathPrefix.substr(0, pathPrefix.size() - 1),
                           e.what()}});
    }
    return parse_chart_document(document, pathPrefix);
}

ChartPair parse_chart_pair(std::string_view sourceDoc, std::string_view targetDoc)
{
    std::vector<Violation> all;
    std::optional<ChartDocument> source, target;
    try {
        source = parse_chart_document(sourceDoc, "source.");
    } catch (const InputError& e) {
        all.insert(all.end(), e.violations().begin(), e.violations().end());
    }
    try {
        target = parse_chart_document(targetDoc, "target.");
    } catch (const InputError& e) {
        all.insert(all.end(), e.violations().begin(), e.violations().end());
    }
    if (!all.empty())
        throw InputError(std::move(all));
    return {std::move(*source), std::move(*target)};
}

Json to_json(const ChartDocument& document)
{
    Json columns = Json::array();
    for (const auto& col : document.table.columns) {
        Json j;
        j["name"] = col.name;
        j["role"] = col.role == ColumnRole::Dimension ? "dimension" : "measure";
        j["valueType"] = col.valueType == ValueType::Categorical ? "categorical"
                         : col.valueType == ValueType::Temporal  ? "temporal"
                                                                 : "numeric";
        if (col.format)
            j["format"] = *col.format;
        columns.push_back(std::move(j));
    }
    Json rows = Json::array();
    for (const auto& row : document.table.rows) {
        Json r = Json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            const auto& name = document.table.columns[i].name;
            if (const auto* s = std::get_if<std::string>(&row[i]))
                r[name] = *s;
            else
                r[name] = std::get<double>(row[i]);
        }
        rows.push_back(std::move(r));
    }
    const ChartSpec& spec = document.chart;
    Json chart;
    chart["type"] = to_string(spec.type);
    if (spec.xDimension)
        chart["x"] = *spec.xDimension;
    if (spec.legendDimension)
        chart["legend"] = *spec.legendDimension;
    Json measures = Json::array();
    for (const auto& m : spec.measures)
        measures.push_back(Json{{"column", m.column}, {"aggregate", to_string(m.aggregate)}});
    chart["measures"] = std::move(measures);
    if (spec.sortOrder)
        chart["sort"] = Json{{"by", spec.sortOrder->by == SortBy::Measure ? "measure" : "label"},
                             {"direction", spec.sortOrder->descending ? "desc" : "asc"}};
    chart["showXAxis"] = spec.showXAxis;
    chart["showYAxis"] = spec.showYAxis;
    chart["showLegend"] = spec.showLegend;
    chart["title"] = spec.title;
    if (!spec.labelMap.empty()) {
        Json lm = Json::object();
        for (const auto& g : spec.labelMap)
            lm[g.column][g.group] = g.members;
        chart["labelMap"] = std::move(lm);
    }
    Json doc;
    doc["data"] = Json{{"columns", std::move(columns)}, {"rows", std::move(rows)}};
    doc["chart"] = std::move(chart);
    return doc;
}

std::string serialize_document(const ChartDocument& document)
{
    return to_json(document).dump(2) + "\n";
}

} // namespace chartmorph
