#include "dps/generators.hpp"

#include <sstream>
#include <stdexcept>

namespace dps {

namespace {

class Builder {
public:
    ComponentId component(const std::string& name, std::vector<std::string> locations,
                          std::vector<std::string> variables = {})
    {
        Component c;
        c.name = name;
        c.locations = std::move(locations);
        c.variables = std::move(variables);
        m_.system.components.push_back(std::move(c));
        return static_cast<ComponentId>(m_.system.components.size() - 1);
    }

    InteractionId interaction(const std::string& name)
    {
        int k = m_.system.interaction_index(name);
        if (k >= 0)
            return k;
        m_.system.interactions.push_back(name);
        return static_cast<InteractionId>(m_.system.interactions.size() - 1);
    }

    void move(ComponentId c, const std::string& from, const std::string& label, const std::string& to,
              Expr guard = Expr::constant(true), std::vector<std::uint8_t> update = {})
    {
        auto& comp = m_.system.components[c];
        Transition t;
        t.from = comp.location_index(from);
        t.to = comp.location_index(to);
        if (t.from < 0 || t.to < 0)
            throw std::logic_error("generator references unknown location");
        t.label = interaction(label);
        guard.for_each_atom([&](Expr& a) {
            a.index = comp.variable_index(a.text);
            a.is_location = false;
        });
        t.guard = std::move(guard);
        if (update.empty())
            update.assign(comp.variables.size(), kUpdateAny);
        t.update = std::move(update);
        comp.transitions.push_back(std::move(t));
    }

    void inform(ComponentId from, ComponentId to) { extra_.emplace(from, to); }

    Model finish(Expr risk = Expr::constant(false))
    {
        m_.system.rebuild_index();
        validate_system(m_.system);
        m_.architecture = CommArchitecture::mandated(m_.system);
        m_.architecture.informs.insert(extra_.begin(), extra_.end());
        resolve_risk(risk, m_.system);
        m_.risk.predicate = std::move(risk);
        return m_;
    }

private:
    Model m_;
    std::set<std::pair<ComponentId, ComponentId>> extra_;
};

std::string num(int k)
{
    return std::to_string(k);
}

} // namespace

Model gen_philosophers(int n, PhilosopherArch arch)
{
    if (n < 2)
        throw std::invalid_argument("philosophers: n must be at least 2");
    Builder b;
    std::vector<ComponentId> phil, fork;
    for (int i = 0; i < n; ++i)
        phil.push_back(b.component("Phil" + num(i), {"think", "hasLeft", "eat"}));
    for (int i = 0; i < n; ++i)
        fork.push_back(b.component("Fork" + num(i), {"free", "heldLeft", "heldRight"}));
    for (int i = 0; i < n; ++i) {
        const int right = (i + 1) % n;
        b.move(phil[i], "think", "takeLeft" + num(i), "hasLeft");
        b.move(phil[i], "hasLeft", "takeRight" + num(i), "eat");
        b.move(phil[i], "eat", "release" + num(i), "think");
        b.move(fork[i], "free", "takeLeft" + num(i), "heldLeft");
        b.move(fork[i], "heldLeft", "release" + num(i), "free");
        b.move(fork[right], "free", "takeRight" + num(i), "heldRight");
        b.move(fork[right], "heldRight", "release" + num(i), "free");
    }
    for (int i = 0; i < n; ++i) {
        const int next = (i + 1) % n;
        const int prev = (i + n - 1) % n;
        switch (arch) {
        case PhilosopherArch::None:
            break;
        case PhilosopherArch::CounterClockwise:
            b.inform(phil[i], phil[next]);
            break;
        case PhilosopherArch::Clockwise:
            b.inform(phil[i], phil[prev]);
            break;
        case PhilosopherArch::Full:
            for (int j = 0; j < 2 * n; ++j)
                b.inform(phil[i], j);
            break;
        }
    }
    if (arch == PhilosopherArch::Full)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 2 * n; ++j)
                b.inform(fork[i], j);
    return b.finish();
}

Model gen_multicore(int cpus, const std::vector<std::string>& broadcasters, bool local)
{
    if (cpus < 2 || cpus > 26)
        throw std::invalid_argument("multicore: between 2 and 26 processors are supported");
    auto cpu_name = [](int i) { return std::string(1, static_cast<char>('A' + i)); };
    std::vector<std::vector<int>> near(static_cast<std::size_t>(cpus));
    if (cpus == 4) {
        near = {{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}};
    } else {
        for (int i = 0; i < cpus; ++i)
            for (int d = 0; d < 3; ++d)
                near[i].push_back((i + d) % cpus + 1);
    }
    std::vector<std::vector<int>> users(static_cast<std::size_t>(cpus) + 1);
    for (int i = 0; i < cpus; ++i)
        for (int k : near[i])
            users[k].push_back(i);

    Builder b;
    std::vector<ComponentId> cpu, bank(static_cast<std::size_t>(cpus) + 1);
    for (int i = 0; i < cpus; ++i) {
        std::vector<std::string> locs{"Start"};
        for (int k : near[i])
            locs.push_back("M" + num(k));
        locs.push_back("Full");
        locs.push_back("Fin");
        cpu.push_back(b.component(cpu_name(i), locs, {"var" + cpu_name(i)}));
    }
    for (int k = 1; k <= cpus; ++k) {
        std::vector<std::string> locs{"free"};
        for (int i : users[k])
            locs.push_back("held" + cpu_name(i));
        bank[k] = b.component("M" + num(k), locs);
    }

    for (int i = 0; i < cpus; ++i) {
        const auto x = cpu_name(i);
        const Expr var = Expr::atom("var" + x);
        for (int k : near[i]) {
            const auto label = x + num(k);
            b.move(cpu[i], "Start", label, "M" + num(k), var, {kUpdateTrue});
            for (int j : near[i])
                if (j != k)
                    b.move(cpu[i], "M" + num(j), label, "Full", var, {kUpdateTrue});
            b.move(bank[k], "free", label, "held" + x);
        }
        b.move(cpu[i], "Start", "idle" + x, "Start", Expr::constant(true), {kUpdateAny});
        b.move(cpu[i], "Full", "work" + x, "Fin", Expr::constant(true), {kUpdateTrue});
        b.move(cpu[i], "Fin", "rel" + x, "Start", Expr::constant(true), {kUpdateFalse});
        for (int k : near[i]) {
            b.move(bank[k], "held" + x, "rel" + x, "free");
            b.move(bank[k], "free", "rel" + x, "free");
            for (int j : users[k])
                if (j != i)
                    b.move(bank[k], "held" + cpu_name(j), "rel" + x, "held" + cpu_name(j));
        }
    }
    for (const auto& name : broadcasters) {
        int i = name.size() == 1 ? name[0] - 'A' : -1;
        if (i < 0 || i >= cpus)
            throw std::invalid_argument("multicore: unknown processor \"" + name + "\"");
        for (int j = 0; j < cpus; ++j)
            if (j != i)
                b.inform(cpu[i], cpu[j]);
    }
    if (local)
        for (int i = 0; i < cpus; ++i) {
            const int next = (i + 1) % cpus;
            b.inform(cpu[i], cpu[next]);
            b.inform(cpu[next], cpu[i]);
        }
    return b.finish();
}

Model gen_robots(int n, int cells)
{
    if (n < 2 || cells < n || cells % 3 != 0)
        throw std::invalid_argument("robots: need n >= 2 and a cell count >= n that is divisible by 3");
    const int rows = 3;
    const int cols = cells / rows;
    auto cell = [](int c) { return "c" + num(c); };
    std::vector<std::string> locs;
    for (int c = 0; c < cells; ++c)
        locs.push_back(cell(c));

    Builder b;
    std::vector<ComponentId> robot;
    for (int i = 0; i < n; ++i)
        robot.push_back(b.component("R" + num(i), locs));
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < cells; ++c) {
            const int r = c / cols;
            const int k = c % cols;
            if (r > 0)
                b.move(robot[i], cell(c), "up" + num(i), cell(c - cols));
            if (r + 1 < rows)
                b.move(robot[i], cell(c), "down" + num(i), cell(c + cols));
            if (k > 0)
                b.move(robot[i], cell(c), "left" + num(i), cell(c - 1));
            if (k + 1 < cols)
                b.move(robot[i], cell(c), "right" + num(i), cell(c + 1));
        }
        b.inform(robot[i], robot[(i + 1) % n]);
    }
    std::vector<Expr> together;
    for (int c = 0; c < cells; ++c) {
        std::vector<Expr> all;
        for (int i = 0; i < n; ++i)
            all.push_back(Expr::atom("R" + num(i) + "@" + cell(c)));
        together.push_back(Expr::conj(std::move(all)));
    }
    Model m = b.finish(Expr::disj(std::move(together)));
    for (int i = 0; i < n; ++i)
        m.system.components[i].initial_location = i;
    return m;
}

PhilosopherArch parse_philosopher_arch(const std::string& s)
{
    if (s == "none")
        return PhilosopherArch::None;
    if (s == "clockwise")
        return PhilosopherArch::Clockwise;
    if (s == "counterclockwise")
        return PhilosopherArch::CounterClockwise;
    if (s == "full")
        return PhilosopherArch::Full;
    throw std::invalid_argument("unknown philosopher architecture \"" + s + "\"");
}

std::string philosopher_arch_name(PhilosopherArch a)
{
    switch (a) {
    case PhilosopherArch::None:
        return "none";
    case PhilosopherArch::Clockwise:
        return "clockwise";
    case PhilosopherArch::CounterClockwise:
        return "counterclockwise";
    case PhilosopherArch::Full:
        return "full";
    }
    return "none";
}

MulticorePattern parse_multicore_pattern(const std::string& s)
{
    MulticorePattern p;
    std::string rest;
    if (s.rfind("broadcast-", 0) == 0) {
        rest = s.substr(10);
    } else if (s == "local") {
        p.local = true;
        return p;
    } else if (s.rfind("local-", 0) == 0) {
        p.local = true;
        rest = s.substr(6);
    } else {
        throw std::invalid_argument("unknown multicore architecture \"" + s + "\"");
    }
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            p.broadcasters.push_back(item);
    if (p.broadcasters.empty())
        throw std::invalid_argument("multicore architecture \"" + s + "\" names no processor");
    return p;
}

} // namespace dps
