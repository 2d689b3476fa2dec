#include <map>
#include <vector>

class Registry {
    int a = 1, *b, c[3];
    std::map<int, std::vector<int>> m_table;
    void (*m_callback)(int, double);
    unsigned m_flags : 3;
    static constexpr int kMax = 16;
    mutable std::vector<double> m_cache{1.0, 2.0};
protected:
    const char* const m_label = "reg";
};
