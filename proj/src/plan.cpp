#include "planexec/plan.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include "planexec/errors.hpp"

namespace planexec::planner {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view s, double& out) {
    std::string tmp(s);
    char* end = nullptr;
    out = std::strtod(tmp.c_str(), &end);
    return end == tmp.c_str() + tmp.size() && !tmp.empty();
}

// `(<action> <args...>)` -> names, validated against the domain.
void parse_action_call(std::string_view body, const pddl::Domain& domain, int line_no,
                       PlanItem& item) {
    body = trim(body);
    if (body.size() < 2 || body.front() != '(' || body.back() != ')')
        throw ParseError("expected (action args...)", line_no, 1);
    std::istringstream words{std::string(body.substr(1, body.size() - 2))};
    std::string word;
    if (!(words >> word)) throw ParseError("empty action", line_no, 1);
    item.action = ActionName(word);
    item.args.clear();
    while (words >> word) item.args.emplace_back(word);

    const pddl::DurativeAction* def = domain.find_action(item.action);
    if (!def)
        throw ParseError("unknown action '" + item.action.str() + "'", line_no, 1);
    if (def->params.size() != item.args.size())
        throw ParseError(fmt::format("action '{}' expects {} arguments, got {}",
                                     item.action.str(), def->params.size(), item.args.size()),
                         line_no, 1);
}

}  // namespace

double snap_time(double t) { return std::round(t * 1e6) / 1e6; }

Plan parse_plan_file(std::string_view text, const pddl::Domain& domain) {
    Plan plan;
    std::vector<bool> has_duration;
    std::istringstream lines{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(lines, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == ';') continue;

        PlanItem item;
        // Timestamp runs until the first tab, ':' or '('.
        size_t cut = line.find_first_of(":\t(");
        if (cut == std::string_view::npos)
            throw ParseError("malformed plan line", line_no, 1);
        if (!parse_double(trim(line.substr(0, cut)), item.time) || item.time < 0)
            throw ParseError("malformed timestamp", line_no, 1);
        item.time = snap_time(item.time);
        if (line[cut] == ':') ++cut;
        std::string_view rest = trim(line.substr(cut));

        // Optional trailing `[duration]`.
        bool with_duration = false;
        if (!rest.empty() && rest.back() == ']') {
            size_t open = rest.rfind('[');
            if (open == std::string_view::npos)
                throw ParseError("malformed duration bracket", line_no, 1);
            double d = 0;
            if (!parse_double(trim(rest.substr(open + 1, rest.size() - open - 2)), d) || d <= 0)
                throw ParseError("malformed duration", line_no, 1);
            item.duration = snap_time(d);
            with_duration = true;
            rest = trim(rest.substr(0, open));
        }
        parse_action_call(rest, domain, line_no, item);
        plan.items.push_back(std::move(item));
        has_duration.push_back(with_duration);
    }

    // Stable sort keeps input order within a timestamp group.
    std::vector<size_t> order(plan.items.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return plan.items[a].time < plan.items[b].time;
    });
    Plan sorted;
    std::vector<bool> sorted_has;
    for (size_t i : order) {
        sorted.items.push_back(plan.items[i]);
        sorted_has.push_back(has_duration[i]);
    }
    plan = std::move(sorted);
    has_duration = std::move(sorted_has);

    // Duration inference for items without brackets: gap to the next strictly
    // greater timestamp; the last group gets the modal gap (smallest value on a
    // frequency tie). A single-timestamp plan falls back to 1 second.
    std::vector<double> stamps;
    for (const auto& it : plan.items)
        if (stamps.empty() || it.time > stamps.back()) stamps.push_back(it.time);
    std::map<double, int> gap_freq;
    for (size_t i = 0; i + 1 < stamps.size(); ++i)
        gap_freq[snap_time(stamps[i + 1] - stamps[i])]++;
    double modal_gap = 1.0;
    int best = 0;
    for (const auto& [gap, n] : gap_freq)
        if (n > best) {
            best = n;
            modal_gap = gap;
        }
    for (size_t i = 0; i < plan.items.size(); ++i) {
        if (has_duration[i]) continue;
        auto next = std::upper_bound(stamps.begin(), stamps.end(), plan.items[i].time);
        plan.items[i].duration =
            snap_time(next != stamps.end() ? *next - plan.items[i].time : modal_gap);
    }
    return plan;
}

std::string print_plan(const Plan& plan) {
    std::string out;
    for (const auto& item : plan.items) {
        out += fmt::format("{:.3f}: ({}", item.time, item.action.str());
        for (const auto& a : item.args) out += " " + a.str();
        out += fmt::format(")  [{:.3f}]\n", item.duration);
    }
    return out;
}

}  // namespace planexec::planner
