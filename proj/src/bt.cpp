#include "planexec/bt.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <sstream>

#include "planexec/errors.hpp"
#include "planexec/printer.hpp"

namespace planexec::bt {
namespace {

using planner::grounded_signature;

class SequenceNode final : public Node {
public:
    explicit SequenceNode(std::vector<NodePtr> children) : children_(std::move(children)) {}

    TickStatus tick(ExecContext& ctx) override {
        while (current_ < children_.size()) {
            const TickStatus s = children_[current_]->tick(ctx);
            if (s == TickStatus::Running) return TickStatus::Running;
            if (s == TickStatus::Failure) return TickStatus::Failure;
            ++current_;  // Success: remember and move on
        }
        return TickStatus::Success;
    }

    void halt(ExecContext& ctx) override {
        if (current_ < children_.size()) children_[current_]->halt(ctx);
    }

    void dump(std::ostream& out, int indent) const override {
        out << std::string(indent, ' ') << "Sequence\n";
        for (const auto& c : children_) c->dump(out, indent + 2);
    }

private:
    std::vector<NodePtr> children_;
    size_t current_ = 0;
};

class ParallelNode final : public Node {
public:
    explicit ParallelNode(std::vector<NodePtr> children)
        : children_(std::move(children)), done_(children_.size(), false) {}

    TickStatus tick(ExecContext& ctx) override {
        bool all_done = true;
        for (size_t i = 0; i < children_.size(); ++i) {
            if (done_[i]) continue;
            const TickStatus s = children_[i]->tick(ctx);
            if (s == TickStatus::Failure) return TickStatus::Failure;
            if (s == TickStatus::Success)
                done_[i] = true;
            else
                all_done = false;
        }
        return all_done ? TickStatus::Success : TickStatus::Running;
    }

    void halt(ExecContext& ctx) override {
        for (size_t i = 0; i < children_.size(); ++i)
            if (!done_[i]) children_[i]->halt(ctx);
    }

    void dump(std::ostream& out, int indent) const override {
        out << std::string(indent, ' ') << "Parallel\n";
        for (const auto& c : children_) c->dump(out, indent + 2);
    }

private:
    std::vector<NodePtr> children_;
    std::vector<bool> done_;
};

// Re-evaluates the check on every tick while the body runs; a failing check
// aborts the body. Memory semantics once the body finished.
class ReactiveCheckPair final : public Node {
public:
    ReactiveCheckPair(NodePtr check, NodePtr body)
        : check_(std::move(check)), body_(std::move(body)) {}

    TickStatus tick(ExecContext& ctx) override {
        if (finished_) return result_;
        const TickStatus cs = check_->tick(ctx);
        if (cs == TickStatus::Failure) {
            body_->halt(ctx);
            finished_ = true;
            result_ = TickStatus::Failure;
            return result_;
        }
        const TickStatus bs = body_->tick(ctx);
        if (bs != TickStatus::Running) {
            finished_ = true;
            result_ = bs;
        }
        return bs;
    }

    void halt(ExecContext& ctx) override {
        if (!finished_) body_->halt(ctx);
    }

    void dump(std::ostream& out, int indent) const override {
        out << std::string(indent, ' ') << "ReactiveCheckPair\n";
        check_->dump(out, indent + 2);
        body_->dump(out, indent + 2);
    }

private:
    NodePtr check_, body_;
    bool finished_ = false;
    TickStatus result_ = TickStatus::Running;
};

class UnitLeaf : public Node {
public:
    explicit UnitLeaf(std::shared_ptr<ActionUnitState> unit) : unit_(std::move(unit)) {}
    void halt(ExecContext&) override {}

protected:
    std::shared_ptr<ActionUnitState> unit_;

    void fail_unit(const std::string& reason) {
        unit_->failure_reason = reason;
        unit_->advance(Phase::FinishedFail);
    }
};

class WaitAtStartReqs final : public UnitLeaf {
public:
    using UnitLeaf::UnitLeaf;

    TickStatus tick(ExecContext& ctx) override {
        if (first_tick_time_ < 0) first_tick_time_ = ctx.now;
        bool ok = false;
        try {
            ok = kb::evaluate(unit_->action.cond_start, ctx.kb->snapshot());
        } catch (const EvaluationError& e) {
            fail_unit(fmt::format("at-start requirements of {}: {}",
                                  grounded_signature(unit_->action), e.what()));
            return TickStatus::Failure;
        }
        if (ok) {
            ctx.emit("wait_start_ok", unit_->node_index);
            return TickStatus::Success;
        }
        if (ctx.wait_timeout >= 0 && ctx.now - first_tick_time_ > ctx.wait_timeout) {
            fail_unit(fmt::format("timed out waiting for at-start requirements of {}",
                                  grounded_signature(unit_->action)));
            return TickStatus::Failure;
        }
        return TickStatus::Running;
    }

    void dump(std::ostream& out, int indent) const override {
        out << std::string(indent, ' ')
            << fmt::format("WaitAtStartReqs {}\n", grounded_signature(unit_->action));
    }

private:
    double first_tick_time_ = -1.0;
};

class ApplyAtStartEffects final : public UnitLeaf {
public:
    using UnitLeaf::UnitLeaf;

    TickStatus tick(ExecContext& ctx) override {
        try {
            ctx.kb->apply_effect(unit_->action.eff_start);
        } catch (const std::exception& e) {
            fail_unit(fmt::format("at-start effects of {}: {}",
                                  grounded_signature(unit_->action), e.what()));
            return TickStatus::Failure;
        }
        unit_->advance(Phase::Started);
        unit_->t_started = ctx.now;
        ctx.emit("apply_start_effects", unit_->node_index);
        return TickStatus::Success;
    }

    void dump(std::ostream& out, int indent) const override {
        out << std::string(indent, ' ')
            << fmt::format("ApplyAtStartEffects {}\n", grounded_signature(unit_->action));
    }
};

class CheckOverAll final : public UnitLeaf {
public:
    using UnitLeaf::UnitLeaf;

    TickStatus tick(ExecContext& ctx) override {
        try {
            if (kb::evaluate(unit_->action.cond_overall, ctx.kb->snapshot()))
                return TickStatus::Success;
            fail_unit(fmt::format("over-all condition of {} violated",
                                  grounded_signature(unit_->action)));
        } catch (const EvaluationError& e) {
            fail_unit(fmt::format("over-all condition of {}: {}",
                                  grounded_signature(unit_->action), e.what()));
        }
        return TickStatus::Failure;
    }

    void dump(std::ostream& out, int indent) const override {
        out << std::string(indent, ' ')
            << fmt::format("CheckOverAll {}\n", grounded_signature(unit_->action));
    }
};

class ExecuteAction final : public UnitLeaf {
public:
    using UnitLeaf::UnitLeaf;

    TickStatus tick(ExecContext& ctx) override {
        if (!started_) {
            started_ = true;
            unit_->advance(Phase::Executing);
            ctx.emit("execute_start", unit_->node_index);
            ctx.dispatcher->start(unit_->node_index, unit_->action);
        }
        const auto status = ctx.dispatcher->poll(unit_->node_index);
        unit_->completion = status.completion;
        if (!status.done) return TickStatus::Running;
        if (status.success) {
            ctx.emit("execute_done", unit_->node_index);
            return TickStatus::Success;
        }
        fail_unit(fmt::format("execution of {} failed{}", grounded_signature(unit_->action),
                              status.detail.empty() ? "" : ": " + status.detail));
        return TickStatus::Failure;
    }

    void halt(ExecContext& ctx) override {
        if (started_) ctx.dispatcher->cancel(unit_->node_index);
    }

    void dump(std::ostream& out, int indent) const override {
        out << std::string(indent, ' ')
            << fmt::format("ExecuteAction {}\n", grounded_signature(unit_->action));
    }

private:
    bool started_ = false;
};

class CheckAtEndReqs final : public UnitLeaf {
public:
    using UnitLeaf::UnitLeaf;

    TickStatus tick(ExecContext& ctx) override {
        // Evaluated exactly once, when the execution has finished.
        try {
            if (kb::evaluate(unit_->action.cond_end, ctx.kb->snapshot()))
                return TickStatus::Success;
            fail_unit(fmt::format("at-end condition of {} does not hold",
                                  grounded_signature(unit_->action)));
        } catch (const EvaluationError& e) {
            fail_unit(fmt::format("at-end condition of {}: {}",
                                  grounded_signature(unit_->action), e.what()));
        }
        return TickStatus::Failure;
    }

    void dump(std::ostream& out, int indent) const override {
        out << std::string(indent, ' ')
            << fmt::format("CheckAtEndReqs {}\n", grounded_signature(unit_->action));
    }
};

class ApplyAtEndEffects final : public UnitLeaf {
public:
    using UnitLeaf::UnitLeaf;

    TickStatus tick(ExecContext& ctx) override {
        try {
            ctx.kb->apply_effect(unit_->action.eff_end);
        } catch (const std::exception& e) {
            fail_unit(fmt::format("at-end effects of {}: {}", grounded_signature(unit_->action),
                                  e.what()));
            return TickStatus::Failure;
        }
        unit_->advance(Phase::FinishedOk);
        unit_->t_finished = ctx.now;
        unit_->completion = 1.0;
        ctx.emit("apply_end_effects", unit_->node_index);
        return TickStatus::Success;
    }

    void dump(std::ostream& out, int indent) const override {
        out << std::string(indent, ' ')
            << fmt::format("ApplyAtEndEffects {}\n", grounded_signature(unit_->action));
    }
};

class WaitForCompletion final : public Node {
public:
    explicit WaitForCompletion(std::shared_ptr<ActionUnitState> unit) : unit_(std::move(unit)) {}

    TickStatus tick(ExecContext&) override {
        switch (unit_->phase) {
            case Phase::FinishedOk: return TickStatus::Success;
            case Phase::FinishedFail: return TickStatus::Failure;
            default: return TickStatus::Running;
        }
    }

    void halt(ExecContext&) override {}

    void dump(std::ostream& out, int indent) const override {
        out << std::string(indent, ' ')
            << fmt::format("WaitForCompletion {}\n", grounded_signature(unit_->action));
    }

private:
    std::shared_ptr<ActionUnitState> unit_;
};

// Marks the unit failed when any part of it fails, so join waiters see it.
class UnitScope final : public Node {
public:
    UnitScope(std::shared_ptr<ActionUnitState> unit, NodePtr inner)
        : unit_(std::move(unit)), inner_(std::move(inner)) {}

    TickStatus tick(ExecContext& ctx) override {
        const TickStatus s = inner_->tick(ctx);
        if (s == TickStatus::Failure && !unit_->finished()) {
            if (unit_->failure_reason.empty()) unit_->failure_reason = "action unit failed";
            unit_->advance(Phase::FinishedFail);
        }
        return s;
    }

    void halt(ExecContext& ctx) override { inner_->halt(ctx); }

    void dump(std::ostream& out, int indent) const override {
        out << std::string(indent, ' ')
            << fmt::format("ActionUnit {}\n", grounded_signature(unit_->action));
        inner_->dump(out, indent + 2);
    }

private:
    std::shared_ptr<ActionUnitState> unit_;
    NodePtr inner_;
};

}  // namespace

const char* to_string(TickStatus s) {
    switch (s) {
        case TickStatus::Success: return "SUCCESS";
        case TickStatus::Failure: return "FAILURE";
        case TickStatus::Running: return "RUNNING";
    }
    return "?";
}

const char* to_string(Phase p) {
    switch (p) {
        case Phase::Pending: return "pending";
        case Phase::Started: return "started";
        case Phase::Executing: return "executing";
        case Phase::FinishedOk: return "finished_ok";
        case Phase::FinishedFail: return "finished_fail";
    }
    return "?";
}

NodePtr make_sequence(std::vector<NodePtr> children) {
    return std::make_unique<SequenceNode>(std::move(children));
}

NodePtr make_parallel(std::vector<NodePtr> children) {
    return std::make_unique<ParallelNode>(std::move(children));
}

NodePtr expand_action_unit(std::shared_ptr<ActionUnitState> unit) {
    std::vector<NodePtr> parts;
    parts.push_back(std::make_unique<WaitAtStartReqs>(unit));
    parts.push_back(std::make_unique<ApplyAtStartEffects>(unit));
    parts.push_back(std::make_unique<ReactiveCheckPair>(std::make_unique<CheckOverAll>(unit),
                                                        std::make_unique<ExecuteAction>(unit)));
    parts.push_back(std::make_unique<CheckAtEndReqs>(unit));
    parts.push_back(std::make_unique<ApplyAtEndEffects>(unit));
    return std::make_unique<UnitScope>(unit, make_sequence(std::move(parts)));
}

NodePtr make_wait_for_completion(std::shared_ptr<ActionUnitState> unit) {
    return std::make_unique<WaitForCompletion>(std::move(unit));
}

std::string BehaviorTree::dump_text() const {
    std::ostringstream out;
    root->dump(out, 0);
    return out.str();
}

std::string BehaviorTree::dump_dot() const {
    // Graphviz rendering derived from the indented dump; one node per line.
    std::istringstream in(dump_text());
    std::string line;
    std::vector<std::pair<int, std::string>> rows;
    while (std::getline(in, line)) {
        int depth = 0;
        while (depth < static_cast<int>(line.size()) && line[depth] == ' ') ++depth;
        rows.emplace_back(depth / 2, line.substr(depth));
    }
    std::string out = "digraph bt {\n  node [shape=box];\n";
    std::vector<int> stack;
    for (size_t i = 0; i < rows.size(); ++i) {
        out += fmt::format("  b{} [label=\"{}\"];\n", i, rows[i].second);
        while (!stack.empty() && rows[stack.back()].first >= rows[i].first) stack.pop_back();
        if (!stack.empty()) out += fmt::format("  b{} -> b{};\n", stack.back(), i);
        stack.push_back(static_cast<int>(i));
    }
    out += "}\n";
    return out;
}

BehaviorTree graph_to_bt(const graph::PlanGraph& g) {
    BehaviorTree tree;
    for (const auto& n : g.nodes) {
        auto unit = std::make_shared<ActionUnitState>();
        unit->node_index = n.index;
        unit->action = n.action;
        tree.units[n.index] = unit;
    }

    // Join ownership: the smallest producer index expands the consumer's unit.
    std::map<int, std::set<int>> succ, prod;
    for (const auto& e : g.edges) {
        succ[e.from].insert(e.to);
        prod[e.to].insert(e.from);
    }
    std::map<int, int> owner;  // consumer -> producer owning its expansion
    for (const auto& [consumer, producers] : prod)
        owner[consumer] = *producers.begin();

    std::function<NodePtr(int, int)> subtree = [&](int node, int via_producer) -> NodePtr {
        const bool is_join = prod.count(node) && prod[node].size() > 1;
        if (is_join && via_producer >= 0 && owner[node] != via_producer)
            return make_wait_for_completion(tree.units[node]);

        NodePtr unit = expand_action_unit(tree.units[node]);
        if (is_join) {
            // The unit starts only after every producer finished, not merely
            // when its condition atoms happen to hold: ordering edges carry no
            // condition to gate on.
            std::vector<NodePtr> gated;
            for (int p : prod[node])
                if (p != via_producer) gated.push_back(make_wait_for_completion(tree.units[p]));
            gated.push_back(std::move(unit));
            unit = make_sequence(std::move(gated));
        }
        const auto& successors = succ[node];
        if (successors.empty()) return unit;

        std::vector<NodePtr> chain;
        chain.push_back(std::move(unit));
        if (successors.size() == 1) {
            chain.push_back(subtree(*successors.begin(), node));
        } else {
            std::vector<NodePtr> branches;
            for (int s : successors) branches.push_back(subtree(s, node));
            chain.push_back(make_parallel(std::move(branches)));
        }
        return make_sequence(std::move(chain));
    };

    std::vector<NodePtr> flows;
    for (int r : graph::roots(g)) flows.push_back(subtree(r, -1));
    if (flows.empty() && !g.nodes.empty())
        throw GraphError("graph has nodes but no roots (cyclic input)");
    tree.root = flows.size() == 1 ? std::move(flows.front()) : make_parallel(std::move(flows));
    if (!tree.root) tree.root = make_sequence({});  // empty plan
    return tree;
}

}  // namespace planexec::bt
