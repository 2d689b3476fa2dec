class Mesh {
public:
    using Index = long;
    typedef double Real;
    enum class Kind { Cell, Node };
    static_assert(sizeof(Real) == 8, "double");

    struct Level {
        int ref_ratio;
        Index ncells;
    };

    Level coarsest() const { return m_levels[0]; }

private:
    union { int i; float f; } m_bits;
    Level m_levels[4];
    Kind m_kind = Kind::Cell;
};
